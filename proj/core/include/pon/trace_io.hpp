#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "pon/simulator.hpp"

namespace pon {

// Trace files are plain CSV with a header row; reals use %.17g so they
// round-trip exactly and identical runs give identical bytes.
//
//   cycles:  t,x_0..x_{N-1},b_0..b_{N-1},r_0..r_{N-1},served_0..served_{N-1}
//   packets: onu,arrival,departure

void write_cycles_csv(std::ostream& out, const SimulationTrace& trace);
void write_packets_csv(std::ostream& out, const SimulationTrace& trace);

/// Writes <dir>/cycles.csv and <dir>/packets.csv. Throws IoError.
void write_trace(const std::filesystem::path& dir, const SimulationTrace& trace);

struct CycleRow {
  std::size_t t = 0;
  AllocationVector allocation;
  DemandVector demand;
  DemandVector report;
  std::vector<double> served;
};

struct PacketRow {
  std::size_t onu = 0;
  double arrival = 0.0;
  double departure = 0.0;
};

std::vector<CycleRow> read_cycles_csv(std::istream& in);
std::vector<PacketRow> read_packets_csv(std::istream& in);

std::string format_real(double v);

}  // namespace pon
