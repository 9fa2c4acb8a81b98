#include "qsdc/infotheory.hpp"

#include <cmath>
#include <stdexcept>

namespace qsdc {

namespace {

constexpr double kDomainSlack = 1e-12;

/// Marginal P(party = value).
double axis_marginal(const JointDistribution& joint, Party party, int value) {
  double sum = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 2; ++k) {
        const int coords[3] = {j, m, k};
        if (coords[static_cast<int>(party)] == value) sum += joint.at(j, m, k);
      }
    }
  }
  return sum;
}

/// Pairwise marginal P(a = va, b = vb).
double pair_marginal(const JointDistribution& joint, Party a, int va, Party b,
                     int vb) {
  double sum = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 2; ++k) {
        const int coords[3] = {j, m, k};
        if (coords[static_cast<int>(a)] == va &&
            coords[static_cast<int>(b)] == vb) {
          sum += joint.at(j, m, k);
        }
      }
    }
  }
  return sum;
}

}  // namespace

double shannon_term(double x) {
  if (x < -kDomainSlack || x > 1.0 + kDomainSlack) {
    throw std::domain_error("entropy argument outside [0, 1]");
  }
  if (x <= 0.0 || x >= 1.0) return 0.0;  // H[0] = H[1] = 0
  return -x * std::log2(x);
}

double marginal_entropy(const JointDistribution& joint, Party party) {
  return shannon_term(axis_marginal(joint, party, 0)) +
         shannon_term(axis_marginal(joint, party, 1));
}

double pair_entropy(const JointDistribution& joint, Party a, Party b) {
  if (a == b) {
    throw std::invalid_argument("pair entropy needs two distinct parties");
  }
  double sum = 0.0;
  for (int va = 0; va < 2; ++va) {
    for (int vb = 0; vb < 2; ++vb) {
      sum += shannon_term(pair_marginal(joint, a, va, b, vb));
    }
  }
  return sum;
}

double conditional_entropy(const JointDistribution& joint, Party target,
                           Party condition) {
  return pair_entropy(joint, target, condition) -
         marginal_entropy(joint, condition);
}

double mutual_information(const JointDistribution& joint, PairSelector pair) {
  Party first = Party::Alice;
  Party second = Party::Bob;
  switch (pair) {
    case PairSelector::AB:
      break;
    case PairSelector::AE:
      second = Party::Eve;
      break;
    case PairSelector::BE:
      first = Party::Bob;
      second = Party::Eve;
      break;
  }
  return marginal_entropy(joint, first) + marginal_entropy(joint, second) -
         pair_entropy(joint, first, second);
}

}  // namespace qsdc
