#include "ammbp/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace ammbp::csv {

std::string format(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Writer::Writer(const std::string& path, const std::vector<std::string>& header) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

Writer& Writer::cell(double v) { return cell(format(v)); }

Writer& Writer::cell(long v) { return cell(std::to_string(v)); }

Writer& Writer::cell(const std::string& v) {
  if (!first_) out_ << ',';
  out_ << v;
  first_ = false;
  return *this;
}

void Writer::end_row() {
  out_ << '\n';
  first_ = true;
  if (!out_) throw std::runtime_error("write failed");
}

}  // namespace ammbp::csv
