#include "io_util.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gcox::io {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& token, const std::string& context) {
  const std::string t = trim(token);
  if (t.empty()) throw std::invalid_argument(context + ": empty numeric field");
  size_t pos = 0;
  double v;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(context + ": cannot parse '" + t + "' as a number");
  }
  if (pos != t.size())
    throw std::invalid_argument(context + ": trailing characters in '" + t + "'");
  return v;
}

int parse_int(const std::string& token, const std::string& context) {
  const std::string t = trim(token);
  if (t.empty()) throw std::invalid_argument(context + ": empty integer field");
  size_t pos = 0;
  long v;
  try {
    v = std::stol(t, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(context + ": cannot parse '" + t + "' as an integer");
  }
  if (pos != t.size())
    throw std::invalid_argument(context + ": trailing characters in '" + t + "'");
  return static_cast<int>(v);
}

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_display(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

Eigen::VectorXd read_vector_csv(const std::string& path, const std::string& expected_header) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::invalid_argument(path + ": empty file");
  if (trim(lines[0]) != expected_header)
    throw std::invalid_argument(path + ": expected header '" + expected_header + "'");
  std::vector<double> vals;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    vals.push_back(parse_double(lines[i], path));
  }
  Eigen::VectorXd v(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
  return v;
}

void write_vector_csv(const Eigen::VectorXd& v, const std::string& path, const std::string& header) {
  std::ostringstream out;
  out << header << "\n";
  for (int i = 0; i < v.size(); ++i) out << format_full(v[i]) << "\n";
  write_text(path, out.str());
}

}  // namespace gcox::io
