#pragma once

#include <string>
#include <vector>

namespace musepref::csv {

// Minimal RFC-4180-ish CSV. Fields containing commas, quotes or newlines are
// quoted on write; quoted fields are unescaped on read.

std::string escape(const std::string& field);
std::vector<std::string> split_line(const std::string& line);
std::string join(const std::vector<std::string>& fields);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

Table read_file(const std::string& path);
void write_file(const std::string& path, const Table& table);

}  // namespace musepref::csv
