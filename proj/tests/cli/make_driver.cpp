// Test helper: writes a small fBm driver file for the CLI fault-injection
// checks.  Usage: make_driver <path> [n_steps].

#include <cstdlib>
#include <iostream>

#include "roughmild/serialization.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_driver <path> [n_steps]\n";
    return 2;
  }
  const int n = argc > 2 ? std::atoi(argv[2]) : 32;
  using namespace roughmild;
  DriverSample sample =
      sample_q_fbm(QSpectrum::polynomial(2.0, 2), 0.4, Grid(1.0, n), 2024);
  write_driver_file(argv[1], sample);
  return 0;
}
