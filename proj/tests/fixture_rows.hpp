#pragma once

// Frozen reference points for the four two-attack scenarios: strategy
// profiles with their expected payoffs and error rates. The same rows ship
// as data/equilibrium_fixtures.csv for the command-line `verify` replay; a
// cli-suite test pins the two copies together.

#include <array>

namespace qsdc_testing {

struct FixtureRow {
  const char* scenario;
  double p;
  double q;
  double r;
  double alice_payoff;
  double eve_payoff;
  double payoff_difference;
  double epsilon;
};

inline constexpr std::array<FixtureRow, 31> kFixtureRows = {{
    {"e1-e2", 0.72, 0.208, 0.225, 0.055457, 0.194543, 0.13908, 0.692404},
    {"e1-e2", 0.45, 0.195, 0.005, 0.0446318, 0.205368, 0.16073, 0.610303},
    {"e1-e3", 0.22, 0.716, 0.88, -0.110497, 0.360497, 0.47099, 0.152451},
    {"e1-e3", 0.442, 0.75, 0.999, -0.0862188, 0.336219, 0.42243, 0.18007},
    {"e1-e3", 0.41, 0.39, 0.412, -0.157149, 0.407149, 0.56429, 0.177181},
    {"e1-e3", 0.76, 0.577, 0.585, -0.136264, 0.386264, 0.52252, 0.21776},
    {"e1-e3", 0.56, 0.14, 0.292, -0.0796824, 0.329682, 0.40936, 0.195874},
    {"e1-e3", 0.325, 0.064, 0.532, -0.0134987, 0.263499, 0.27699, 0.329893},
    {"e1-e3", 0.84, 0.047, 0.525, 0.0324084, 0.217592, 0.18518, 0.460299},
    {"e1-e3", 0.485, 0.465, 0.915, -0.090828, 0.340828, 0.43165, 0.363472},
    {"e1-e3", 0.235, 0.096, 0.83, -0.013356, 0.263356, 0.27671, 0.463323},
    {"e1-e3", 0.47, 0.195, 0.93, -0.0182231, 0.268223, 0.28644, 0.550258},
    {"e2-e3", 0.385, 0.215, 0.262, -0.111965, 0.361965, 0.47393, 0.151087},
    {"e2-e3", 0.47, 0.055, 0.205, -0.0276507, 0.277651, 0.3053, 0.143882},
    {"e2-e3", 0.25, 0.096, 0.54, -0.0216673, 0.271667, 0.29633, 0.31482},
    {"e2-e3", 0.24, 0.268, 0.71, -0.0436386, 0.293639, 0.33727, 0.35838},
    {"e2-e3", 0.70, 0.138, 0.58, -0.00442078, 0.254421, 0.25884, 0.430969},
    {"e2-e3", 0.284, 0.02, 0.472, 0.0188573, 0.231143, 0.21228, 0.298653},
    {"e2-e3", 0.235, 0.02, 0.758, 0.0320242, 0.217976, 0.18595, 0.461603},
    {"e2-e3", 0.222, 0.10, 0.865, 0.015688, 0.234312, 0.21862, 0.492488},
    {"e2-e3", 0.54, 0.048, 0.795, 0.0558727, 0.194127, 0.13825, 0.587155},
    {"e2-e3", 0.80, 0.115, 0.885, 0.0722149, 0.177785, 0.10557, 0.709991},
    {"e1-e4", 0.23, 0.095, 0.825, -0.00433851, 0.254339, 0.25867, 0.502924},
    {"e1-e4", 0.245, 0.008, 0.76, 0.0492999, 0.2007, 0.1514, 0.529315},
    {"e1-e4", 0.572, 0.02, 0.765, 0.0750153, 0.174985, 0.0999, 0.648014},
    {"e1-e4", 0.928, 0.032, 0.774, 0.0997124, 0.150288, 0.0505, 0.77876},
    {"e1-e4", 0.324, 0.065, 0.535, 0.0114311, 0.238569, 0.22713, 0.447399},
    {"e1-e4", 0.85, 0.045, 0.522, 0.0603314, 0.189669, 0.12933, 0.580622},
    {"e1-e4", 0.405, 0.387, 0.415, -0.124349, 0.374349, 0.49869, 0.324962},
    {"e1-e4", 0.54, 0.15, 0.295, -0.0471361, 0.297136, 0.34427, 0.369328},
    {"e1-e4", 0.75, 0.57, 0.582, -0.114078, 0.364078, 0.47815, 0.323478},
}};

}  // namespace qsdc_testing
