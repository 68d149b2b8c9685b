#pragma once

#include <vector>

#include "hcarleson/geometry.hpp"
#include "hcarleson/harmonic.hpp"
#include "hcarleson/measures.hpp"
#include "hcarleson/quadrature.hpp"

namespace hc {

using Tuple = std::vector<HarmonicFunction>;

/// A norm value plus the quadrature tolerance flag of the integrals behind it.
struct NormResult {
  double value = 0.0;
  bool tolerance_met = true;
};

/// |x|^p with a multiplication fast path for small integer p.
double abs_pow(double x, double p);

/// Rejects a configuration whose integral of |f|^p t^weight diverges on the
/// half-space: at infinity (p * decay <= n + 1 + weight) or at a boundary
/// singularity of a Poisson kernel with zero shift.
void require_bergman_convergence(const HarmonicFunction& f, double p, double weight);

/// (integral over the window of |f|^p t^lambda)^(1/p).
NormResult norm_A(const HarmonicFunction& f, double p, double lambda, const WhitneyDecomposition& d,
                  const QuadratureConfig& cfg);

/// Mixed norms over the window heights. B integrates each slice first and then
/// in height; F integrates each vertical line first and then horizontally.
NormResult norm_B(const HarmonicFunction& f, double p, double q, double alpha, const Window& w,
                  const QuadratureConfig& cfg);
NormResult norm_F(const HarmonicFunction& f, double p, double q, double alpha, const Window& w,
                  const QuadratureConfig& cfg);

/// Per-slab values integral over H_k of |f|^p d(mu), one per slab of the
/// family (zero for slabs outside the window heights).
std::vector<double> slab_values(const HarmonicFunction& f, double p, const Measure& mu, const SlabFamily& slabs,
                                const WhitneyDecomposition& d, const QuadratureConfig& cfg,
                                bool* tolerance_met = nullptr);

/// l^(q/p) aggregate of slab values, returned as a norm (power 1/q). Computed
/// as max^(1/p) * (sum (v/max)^(q/p))^(1/q) with plain ordered summation so
/// that the result is monotone in q in floating point as well.
double herz_aggregate(const std::vector<double>& values, double p, double q);

NormResult norm_K(const HarmonicFunction& f, double p, double q, const Measure& mu, const SlabFamily& slabs,
                  const WhitneyDecomposition& d, const QuadratureConfig& cfg);

/// Slice norm M_p(f, t) over [-R, R]^n.
NormResult slice_norm(const HarmonicFunction& f, double p, double t, double x_half_width, const QuadratureConfig& cfg);

struct HardyResult {
  double value = 0.0;
  double argmax_t = 0.0;
  std::vector<double> heights;
  std::vector<double> slice_norms;
  bool tolerance_met = true;
};

/// Sup of M_p(f, t) over a geometric height grid with `per_octave` points per
/// doubling across the window heights.
HardyResult norm_hardy(const HarmonicFunction& f, double p, const Window& w, const QuadratureConfig& cfg,
                       int per_octave = 2);

/// Integral over the window of prod |f_i|^(p_i) t^s.
NormResult product_integral(const Tuple& fs, const std::vector<double>& p, double s, const WhitneyDecomposition& d,
                            const QuadratureConfig& cfg);

/// Per-cube integrals of prod |f_i|^p d(mu).
std::vector<double> product_per_cube(const Tuple& fs, double p, const Measure& mu, const WhitneyDecomposition& d,
                                     const QuadratureConfig& cfg, bool* tolerance_met = nullptr);

/// (sum_k (integral over cube_k of prod |f_i|^p d(mu))^(q/p))^(1/q).
NormResult apqm_norm(const Tuple& fs, double p, double q, const Measure& mu, const WhitneyDecomposition& d,
                     const QuadratureConfig& cfg);

/// prod_i [sum_k (integral over the enlarged cube of |f_i|^(p_i) t^alpha)^(q_i)]^(1/q_i).
NormResult t1_rhs(const Tuple& fs, const std::vector<double>& p, const std::vector<double>& q, double alpha,
                  const WhitneyDecomposition& d, const QuadratureConfig& cfg);

/// Inner integral over Q_w of |f|^sigma t^alpha by a fixed tensor rule.
double local_cube_integral(const HarmonicFunction& f, double sigma, double alpha, const Point& w, int order);

/// Integral over the window of (integral over Q_w of |f|^sigma t^alpha dz)^e dw.
NormResult local_mean_functional(const HarmonicFunction& f, double sigma, double alpha, double e,
                                 const WhitneyDecomposition& d, const QuadratureConfig& cfg);

/// Max of |f| over the tensor nodes of a box plus its corners. A lower bound
/// for the true sup.
double sup_on_box(const HarmonicFunction& f, const Box& box, int order);

}  // namespace hc
