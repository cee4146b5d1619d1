#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace gcox::io {

// Splits a CSV line on commas; no quoting support (none of our files need it).
std::vector<std::string> split_csv(const std::string& line);

std::string trim(const std::string& s);

// Strict numeric parsing: the whole token must be consumed.
double parse_double(const std::string& token, const std::string& context);
int parse_int(const std::string& token, const std::string& context);

// %.17g: shortest form that round-trips a double exactly on read-back.
std::string format_full(double x);
// %.10g: display precision for aggregate tables.
std::string format_display(double x);

std::vector<std::string> read_lines(const std::string& path);
void write_text(const std::string& path, const std::string& content);

// Single-column vector file with a one-token header line.
Eigen::VectorXd read_vector_csv(const std::string& path, const std::string& expected_header);
void write_vector_csv(const Eigen::VectorXd& v, const std::string& path, const std::string& header);

}  // namespace gcox::io
