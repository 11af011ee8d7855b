#include "pon/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace pon {

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_cycles_csv(std::ostream& out, const SimulationTrace& trace) {
  const std::size_t n = trace.config.num_onus;
  out << 't';
  for (const char* prefix : {"x_", "b_", "r_", "served_"})
    for (std::size_t i = 0; i < n; ++i) out << ',' << prefix << i;
  out << '\n';
  for (std::size_t t = 0; t < trace.cycles.size(); ++t) {
    const auto& rec = trace.cycles[t];
    out << t;
    for (double v : rec.allocation) out << ',' << format_real(v);
    for (double v : rec.demand) out << ',' << format_real(v);
    for (double v : rec.report) out << ',' << format_real(v);
    for (double v : rec.served) out << ',' << format_real(v);
    out << '\n';
  }
}

void write_packets_csv(std::ostream& out, const SimulationTrace& trace) {
  out << "onu,arrival,departure\n";
  for (const auto& p : trace.packets)
    out << p.onu << ',' << format_real(p.arrival_time) << ',' << format_real(p.departure_time.value()) << '\n';
}

void write_trace(const std::filesystem::path& dir, const SimulationTrace& trace) {
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir / name).string());
    return out;
  };
  auto cycles = open("cycles.csv");
  write_cycles_csv(cycles, trace);
  auto packets = open("packets.csv");
  write_packets_csv(packets, trace);
  if (!cycles || !packets) throw Error(ErrorCode::IoError, "write to " + dir.string() + " failed");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  return out;
}

double real(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<CycleRow> read_cycles_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "cycles file is empty");
  const auto header = split(line);
  if (header.empty() || header[0] != "t" || (header.size() - 1) % 4 != 0)
    throw Error(ErrorCode::ParseError, "unexpected cycles header");
  const std::size_t n = (header.size() - 1) / 4;
  std::vector<CycleRow> rows;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    const auto f = split(line);
    if (f.size() != header.size())
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": wrong field count");
    CycleRow row;
    row.t = static_cast<std::size_t>(real(f[0], line_no));
    row.allocation = AllocationVector(n);
    row.demand = DemandVector(n);
    row.report = DemandVector(n);
    row.served.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      row.allocation[i] = real(f[1 + i], line_no);
      row.demand[i] = real(f[1 + n + i], line_no);
      row.report[i] = real(f[1 + 2 * n + i], line_no);
      row.served[i] = real(f[1 + 3 * n + i], line_no);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<PacketRow> read_packets_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "onu,arrival,departure")
    throw Error(ErrorCode::ParseError, "unexpected packets header");
  std::vector<PacketRow> rows;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    const auto f = split(line);
    if (f.size() != 3) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": wrong field count");
    rows.push_back({static_cast<std::size_t>(real(f[0], line_no)), real(f[1], line_no), real(f[2], line_no)});
  }
  return rows;
}

}  // namespace pon
