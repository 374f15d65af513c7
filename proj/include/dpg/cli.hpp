// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dpg/dpg_solver.hpp"

namespace dpg {

struct StudyConfig {
  std::string problem = "smooth";  // smooth | singular
  int scheme = 2;                  // 1 | 2
  std::string refine = "uniform";  // uniform | adaptive
  double theta = 0.5;
  int levels = 5;
  int max_dofs = 20000;
  int field_degree = 0;
  int test_degree = 4;
  bool timing = true;
  std::string output = "-";

  /// Throws std::invalid_argument on any inconsistent field.
  void validate() const;
};

std::vector<StudyRecord> run_study(const StudyConfig& config);

void write_study_csv(std::ostream& os, const std::vector<StudyRecord>& records);

struct TracelabConfig {
  std::string mode = "dirac";  // dirac | unbounded | norm-identity
  int eps_min_exponent = 2;    // eps = 2^-k for k in [min, max]
  int eps_max_exponent = 10;
  std::vector<int> n_list{1, 10, 100, 1000};
  int degree_min = 4;
  int degree_max = 8;
  std::string output = "-";

  void validate() const;
};

void run_tracelab(const TracelabConfig& config, std::ostream& os);

/// Entry point of the command line tool. Returns 0 on success, 1 on usage
/// errors and 2 on numerical failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dpg
