// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/model.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace irsbeam {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void invalid(const std::string& what) { throw InvalidInstance(what); }

}  // namespace

void SystemInstance::validate() const {
  if (M <= 0) invalid("M must be positive");
  if (K <= 0) invalid("K must be positive");
  if (N < 0) invalid("N must be nonnegative");
  if (static_cast<int>(h_d.size()) != K) invalid("h_d must hold K vectors");
  for (const auto& h : h_d) {
    if (h.size() != M) invalid("h_d entries must have length M");
  }
  if (N == 0) {
    if (G.rows() != 0) invalid("G must be empty when N = 0");
  } else if (G.rows() != N || G.cols() != M) {
    invalid("G must be N x M");
  }
  if (N > 0) {
    if (static_cast<int>(h_r.size()) != K) invalid("h_r must hold K vectors");
    for (const auto& h : h_r) {
      if (h.size() != N) invalid("h_r entries must have length N");
    }
  }
  if (static_cast<int>(omega.size()) != K) invalid("omega must hold K weights");
  for (double w : omega) {
    if (!(w > 0.0)) invalid("omega entries must be positive");
  }
  if (!(P_T > 0.0)) invalid("P_T must be positive");
  if (!(sigma2 > 0.0)) invalid("sigma2 must be positive");
  if (!(eta > 0.0 && eta <= 1.0)) invalid("eta must lie in (0, 1]");
}

SystemInstance SystemInstance::without_irs() const {
  SystemInstance out = *this;
  out.N = 0;
  out.G = CMat(0, M);
  out.h_r.clear();
  return out;
}

FeasibleSet FeasibleSet::discrete(int levels) {
  if (levels < 2) throw std::invalid_argument("discrete phase set needs at least 2 levels");
  return FeasibleSet(Kind::DiscretePhase, levels);
}

FeasibleSet FeasibleSet::parse(std::string_view text) {
  if (text == "ideal") return ideal();
  if (text == "continuous") return continuous();
  constexpr std::string_view prefix = "discrete:";
  if (text.starts_with(prefix)) {
    auto digits = text.substr(prefix.size());
    int levels = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), levels);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return discrete(levels);
  }
  throw std::invalid_argument("unknown feasible set '" + std::string(text) +
                              "' (expected ideal, continuous or discrete:<levels>)");
}

std::string FeasibleSet::name() const {
  switch (kind_) {
    case Kind::Ideal:
      return "ideal";
    case Kind::ContinuousPhase:
      return "continuous";
    case Kind::DiscretePhase:
      return "discrete:" + std::to_string(levels_);
  }
  return {};
}

std::vector<CVec> combined_channel(const SystemInstance& inst, const CVec& theta) {
  if (static_cast<int>(inst.h_d.size()) != inst.K) invalid("h_d must hold K vectors");
  std::vector<CVec> h(inst.h_d.begin(), inst.h_d.end());
  if (inst.N == 0) return h;
  if (theta.size() != inst.N) invalid("theta length must equal N");
  if (static_cast<int>(inst.h_r.size()) != inst.K) invalid("h_r must hold K vectors");
  const double amp = std::sqrt(inst.eta);
  for (int k = 0; k < inst.K; ++k) {
    if (inst.h_r[k].size() != inst.N) invalid("h_r entries must have length N");
    CVec reflected = amp * theta.cwiseProduct(inst.h_r[k]);
    h[k].noalias() += inst.G.adjoint() * reflected;
  }
  return h;
}

RVec sinr(std::span<const CVec> h, const CMat& W, double sigma2) {
  const auto K = static_cast<Eigen::Index>(h.size());
  if (W.cols() != K) invalid("W must have K columns");
  RVec gamma(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (h[k].size() != W.rows()) invalid("channel length must equal M");
    // row vector h_k^H W
    Eigen::RowVectorXcd g = h[k].adjoint() * W;
    const double signal = std::norm(g(k));
    const double total = g.cwiseAbs2().sum();
    gamma(k) = signal / (total - signal + sigma2);
  }
  return gamma;
}

RVec sinr(const SystemInstance& inst, const CMat& W, const CVec& theta) {
  const auto h = combined_channel(inst, theta);
  return sinr(h, W, inst.sigma2);
}

double wsr(std::span<const double> omega, const RVec& gamma) {
  double rate = 0.0;
  for (Eigen::Index k = 0; k < gamma.size(); ++k) rate += omega[k] * std::log2(1.0 + gamma(k));
  return rate;
}

double wsr(const SystemInstance& inst, const CMat& W, const CVec& theta) {
  return wsr(inst.omega, sinr(inst, W, theta));
}

double total_power(const CMat& W) { return W.squaredNorm(); }

double circular_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

int discrete_level(cdouble z, int levels) {
  if (z == cdouble(0.0, 0.0)) return 0;
  double phase = std::arg(z);
  if (phase < 0.0) phase += kTwoPi;
  const double step = kTwoPi / levels;
  const int lo = static_cast<int>(std::floor(phase / step)) % levels;
  const int hi = (lo + 1) % levels;
  const double d_lo = circular_distance(phase, lo * step);
  const double d_hi = circular_distance(phase, hi * step);
  if (d_lo < d_hi) return lo;
  if (d_hi < d_lo) return hi;
  return std::min(lo, hi);
}

cdouble level_point(int index, int levels) {
  if (index == 0) return {1.0, 0.0};
  return std::polar(1.0, kTwoPi * index / levels);
}

cdouble project(cdouble z, const FeasibleSet& F) {
  switch (F.kind()) {
    case FeasibleSet::Kind::Ideal: {
      const double r = std::abs(z);
      return r <= 1.0 ? z : z / r;
    }
    case FeasibleSet::Kind::ContinuousPhase: {
      const double r = std::abs(z);
      if (r == 0.0) return {1.0, 0.0};
      return z / r;
    }
    case FeasibleSet::Kind::DiscretePhase:
      return level_point(discrete_level(z, F.levels()), F.levels());
  }
  return z;
}

CVec project(const CVec& theta, const FeasibleSet& F) {
  CVec out(theta.size());
  for (Eigen::Index n = 0; n < theta.size(); ++n) out(n) = project(theta(n), F);
  return out;
}

bool in_feasible_set(cdouble z, const FeasibleSet& F, double tol) {
  const double r = std::abs(z);
  switch (F.kind()) {
    case FeasibleSet::Kind::Ideal:
      return r <= 1.0 + tol;
    case FeasibleSet::Kind::ContinuousPhase:
      return std::abs(r - 1.0) <= tol;
    case FeasibleSet::Kind::DiscretePhase: {
      if (std::abs(r - 1.0) > tol) return false;
      const int idx = discrete_level(z, F.levels());
      return std::abs(z - level_point(idx, F.levels())) <= tol;
    }
  }
  return false;
}

bool in_feasible_set(const CVec& theta, const FeasibleSet& F, double tol) {
  for (Eigen::Index n = 0; n < theta.size(); ++n) {
    if (!in_feasible_set(theta(n), F, tol)) return false;
  }
  return true;
}

void check_state(const SystemInstance& inst, const BeamformerState& state, const FeasibleSet& F) {
  if (state.W.rows() != inst.M || state.W.cols() != inst.K) invalid("W must be M x K");
  if (state.theta.size() != inst.N) invalid("theta length must equal N");
  const double power = total_power(state.W);
  if (power > inst.P_T * (1.0 + kPowerTol)) {
    std::ostringstream msg;
    msg << "power constraint violated: " << power << " > " << inst.P_T;
    throw InternalConsistencyError(msg.str());
  }
  if (!in_feasible_set(state.theta, F)) {
    throw InternalConsistencyError("theta outside feasible set " + F.name());
  }
}

}  // namespace irsbeam
