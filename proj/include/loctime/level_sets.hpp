#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loctime/lattice_domain.hpp"
#include "loctime/walk.hpp"

namespace loctime {

enum class LevelKind { thick, thin, light, avoided };

const char* level_kind_name(LevelKind k);
LevelKind level_kind_from_name(const std::string& s);

struct ScaleSequences {
  int N = 2;
  double theta = 0.0;
  double lambda = 0.0;
  LevelKind kind = LevelKind::thick;
  double g = 0.0;
  double alpha = 0.0;
  double t_N = 0.0;      // 2 g theta (log N)^2
  double a_N = 0.0;      // 2 g (sqrt(theta) +- lambda)^2 (log N)^2
  double W_N = 0.0;
  double W_hat_N = 0.0;  // N^2 exp(-t_N / (g log N))
  double a_hat_N = 0.0;  // 2 lambda sqrt(g) log N
  double K_N = 0.0;

  // Normalizer of the point measure for this kind.
  double normalizer() const;
};

// Throws ParameterError naming the violated range constraint. With
// allow_degenerate, lambda = 0 is accepted (a_N = t_N).
ScaleSequences scale_sequences(int N, double theta, double lambda, LevelKind kind,
                               bool allow_degenerate = false);

struct Atom {
  double x = 0.0, y = 0.0;       // x/N
  std::uint32_t vertex = 0;
  std::optional<double> value;   // absent for avoided points
  std::vector<double> profile;   // over {|z|_inf <= r}, row-major offsets
};

struct PointMeasure {
  LevelKind kind = LevelKind::thick;
  ScaleSequences scales;
  double weight_per_atom = 0.0;
  int radius = -1;               // -1: no profiles
  std::size_t outside_reads = 0; // profile offsets that fell outside D_N
  std::vector<Atom> atoms;

  double total_mass() const { return weight_per_atom * static_cast<double>(atoms.size()); }
  std::size_t count_at_least(double h) const;
};

PointMeasure extract_level_measure(const LocalTimeField& field, const LatticeDomain& domain,
                                   const ScaleSequences& scales, LevelKind kind,
                                   std::optional<int> radius = std::nullopt);

struct QSequence {
  double theta = 0.0;
  std::vector<double> q;
};

// q_{n+1} = n! sum_j c^{j+1} / (j! (j+1)! (n-j)!), c = alpha^2 theta / 8 = pi theta.
QSequence q_sequence(double theta, int nmax);
// Same numbers from the series of e^x times the Bessel term x I_1(...)
QSequence q_sequence_bessel(double theta, int nmax);
// sum_n q_n (1 + s/4)^{-n}; throws if the truncation has not converged.
double q_generating_function(const QSequence& q, double s);

// delta_0 + density, density(h) = sum c'^{n+1} h^n / (n! (n+1)!), c' = alpha^2 theta / 2.
class MuTilde {
 public:
  explicit MuTilde(double theta);
  double atom_mass() const { return 1.0; }
  double density(double h) const;
  // 1 + int_0^inf density(h) e^{-s h} dh by quadrature.
  double laplace(double s) const;
  double laplace_closed_form(double s) const;

 private:
  double theta_;
  double c_;
};

// Each entry z becomes (1/4) sum_{j < 4 l(z)} tau_{z,j}, tau i.i.d. Exp(1).
std::vector<double> resample_exponential_profile(std::span<const double> profile, std::uint64_t seed,
                                                 std::uint64_t replicate = 0);
// E exp(-sum_z t_z out_z) = exp(-sum_z 4 l(z) log(1 + t_z/4)).
double resample_laplace_closed_form(std::span<const double> profile, std::span<const double> t);

enum class GammaLemma { upper, lower };  // upper: Q-ratio bound, lower: P-ratio bound

struct GammaTailResult {
  double lhs_ratio = 0.0;
  double rhs_bound = 0.0;
  bool holds = false;
};

// upper: Q(k,k+s+t)/Q(k,k+s) <= exp(-s t/(k+s+t)),   needs s >= t >= 0.
// lower: P(k,k-s-t)/P(k,k-s) <= exp(-t (s-1)/(k-s)), needs s,t >= 0, s+t < k.
GammaTailResult gamma_tail_inequality_check(int k, double s, double t, GammaLemma which);

}  // namespace loctime
