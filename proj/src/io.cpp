#include "pidmap/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pidmap {

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_csv(const SimResult& r, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (std::size_t i = 0; i < r.size(); ++i) {
    os << format_double(r.t[i]) << ',' << format_double(r.q[i]) << ','
       << format_double(r.qdot[i]) << ',' << format_double(r.e1[i]) << ','
       << format_double(r.e2[i]) << ',' << format_double(r.qI[i]) << ','
       << format_double(r.u[i]) << ',' << format_double(r.u0[i]) << ','
       << format_double(r.dhat[i]) << ',' << format_double(r.d[i]) << ','
       << format_double(r.dtilde[i]) << '\n';
  }
}

namespace {

double parse_field(const std::string& line, std::size_t& pos) {
  const std::size_t end = line.find(',', pos);
  const std::size_t stop = (end == std::string::npos) ? line.size() : end;
  double v;
  const auto res = std::from_chars(line.data() + pos, line.data() + stop, v);
  if (res.ec != std::errc{} || res.ptr != line.data() + stop) {
    throw std::invalid_argument("malformed CSV number: " + line.substr(pos, stop - pos));
  }
  pos = (end == std::string::npos) ? line.size() : end + 1;
  return v;
}

}  // namespace

SimResult read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw std::invalid_argument("unexpected CSV header: " + line);
  }

  SimResult r;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t pos = 0;
    r.t.push_back(parse_field(line, pos));
    r.q.push_back(parse_field(line, pos));
    r.qdot.push_back(parse_field(line, pos));
    r.e1.push_back(parse_field(line, pos));
    r.e2.push_back(parse_field(line, pos));
    r.qI.push_back(parse_field(line, pos));
    r.u.push_back(parse_field(line, pos));
    r.u0.push_back(parse_field(line, pos));
    r.dhat.push_back(parse_field(line, pos));
    r.d.push_back(parse_field(line, pos));
    r.dtilde.push_back(parse_field(line, pos));
    if (pos != line.size()) {
      throw std::invalid_argument("trailing data in CSV row: " + line);
    }
  }
  return r;
}

nlohmann::json summary_json(const SimResult& r) {
  double max_u = 0.0, max_dhat = 0.0;
  for (double v : r.u) max_u = std::max(max_u, std::abs(v));
  for (double v : r.dhat) max_dhat = std::max(max_dhat, std::abs(v));
  return nlohmann::json{
      {"ultimate_bound", r.ub.epsilon},
      {"settling_time", r.ub.t_epsilon},
      {"max_control", max_u},
      {"max_dhat", max_dhat},
      {"settled", r.ub.settled},
  };
}

}  // namespace pidmap
