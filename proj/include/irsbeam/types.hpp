// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irsbeam {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

/// Raised when a SystemInstance (or a state paired with it) has inconsistent
/// dimensions or out-of-range physical parameters.
class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not produce a result satisfying its contract.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invariant that holds for every correct implementation was violated.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One realization of the IRS-aided multiuser MISO downlink.
///
/// All powers are linear milliwatts; channels are linear amplitudes.
struct SystemInstance {
  int M = 0;  ///< BS antennas
  int K = 0;  ///< users
  int N = 0;  ///< IRS elements, 0 means no IRS

  std::vector<CVec> h_d;  ///< K direct channels, length M
  CMat G;                 ///< N x M, BS -> IRS
  std::vector<CVec> h_r;  ///< K IRS -> user channels, length N
  std::vector<double> omega;

  double P_T = 1.0;
  double sigma2 = 1.0;
  double eta = 1.0;

  /// Throws InvalidInstance if any field is inconsistent.
  void validate() const;

  /// Copy with the IRS removed (N = 0).
  SystemInstance without_irs() const;
};

/// Reflection-coefficient constraint regime.
class FeasibleSet {
 public:
  enum class Kind { Ideal, ContinuousPhase, DiscretePhase };

  static FeasibleSet ideal() { return FeasibleSet(Kind::Ideal, 0); }
  static FeasibleSet continuous() { return FeasibleSet(Kind::ContinuousPhase, 0); }
  static FeasibleSet discrete(int levels);

  /// Accepts "ideal", "continuous", "discrete:<tau>".
  static FeasibleSet parse(std::string_view text);

  Kind kind() const { return kind_; }
  int levels() const { return levels_; }
  bool is_phase_only() const { return kind_ != Kind::Ideal; }

  /// Inverse of parse().
  std::string name() const;

  bool operator==(const FeasibleSet&) const = default;

 private:
  FeasibleSet(Kind kind, int levels) : kind_(kind), levels_(levels) {}

  Kind kind_;
  int levels_;
};

struct BeamformerState {
  CMat W;         ///< M x K, column k is w_k
  CVec theta;     ///< N reflection coefficients
  RVec alpha;     ///< K
  CVec beta;      ///< K
  CVec epsilon;   ///< K
};

inline constexpr double kPowerTol = 1e-9;
inline constexpr double kProjTol = 1e-9;

}  // namespace irsbeam
