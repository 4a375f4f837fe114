#pragma once

#include <string>
#include <vector>

#include "reflow/geom.hpp"

namespace reflow {

// Shortest-roundtrip decimal text; NaN prints as "na" (field not applicable).
std::string format_num(double v);

std::string csv_header();
std::string csv_row(const GeometryRow& row);
std::string csv_table(const std::vector<GeometryRow>& rows);

// Ordered JSON twin of the table (stable key order, byte-identical reruns).
std::string json_table(const std::vector<GeometryRow>& rows);

void write_text_file(const std::string& path, const std::string& content);

} // namespace reflow
