#pragma once

#include <iosfwd>
#include <string>

#include "hurstq/mc.hpp"
#include "hurstq/synthesis.hpp"

namespace hurstq {

// Shortest-round-trip formatting so CSV output is byte-stable and re-reads
// to the identical double.
std::string format_double(double x);

// Path files: a commented key=value header followed by one value per line.
void write_path_csv(std::ostream& out, const SamplePath& path);
SamplePath read_path_csv(std::istream& in, const std::string& name = "<stream>");
void write_path_file(const std::string& filename, const SamplePath& path);
SamplePath read_path_file(const std::string& filename);

// Monte Carlo reports: summary table plus the raw per-replication table.
void write_mc_summary_csv(std::ostream& out, const McReport& report);
void write_mc_raw_csv(std::ostream& out, const McReport& report);

}  // namespace hurstq
