#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csmri/grid.hpp"
#include "csmri/transform.hpp"

namespace csmri {

/// Penalty parameters and stopping rule for the ADMM reconstruction.
struct SolverConfig {
  double mu1 = 10.0;  // data-consistency penalty
  double mu2 = 20.0;  // coupling penalty; soft-threshold level is 1/mu2
  int max_iters = 500;
  double tol = 1e-6;  // on r1/||Y0||_F and r2/||Y0||_F
  bool record_trace = true;
  Exec exec = Exec::parallel;

  // Throws std::invalid_argument on mu <= 0, max_iters < 1 or tol < 0.
  void validate() const;
};

/// ADMM iterates. `x` caches IFFT(y) so one iteration needs two FFTs.
struct SolverState {
  ComplexImage y;   // k-space estimate
  ComplexImage z;   // image-domain auxiliary
  ComplexImage l1;  // data-consistency multiplier, zero off the mask
  ComplexImage l2;  // coupling multiplier
  ComplexImage x;   // IFFT(y)
  int iter = 0;
};

/// Zero multipliers, y = zero-filled k-space, z = IFFT(y).
SolverState make_initial_state(const ComplexImage& y0_masked, const TransformPlan& plan,
                               Exec exec = Exec::parallel);

enum class Termination { converged, max_iters, unconstrained };
std::string to_string(Termination t);

struct IterationRecord {
  int iter = 0;
  double objective = 0;  // l1_norm(Z)
  double r1 = 0;         // ||Y(mask) - Y0(mask)||_F
  double r2 = 0;         // ||Z - IFFT(Y)||_F
  std::optional<double> psnr;
  double seconds = 0;  // cumulative
};

struct ReconReport {
  std::vector<IterationRecord> records;
  std::optional<double> initial_psnr;  // zero-filled image vs reference
  std::optional<double> final_psnr;
  int iterations = 0;
  Termination termination = Termination::max_iters;
  ComplexImage image;  // IFFT(Y) at exit
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int iteration, const std::string& which);
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Complex soft-threshold, the minimizer of |x| + 1/(2 lambda) |x - a|^2.
cplx soft_threshold(cplx a, double lambda);

/// Z = soft(IFFT(Y) + L2/mu2, 1/mu2), elementwise.
ComplexImage update_z(const SolverState& state, const TransformPlan& plan,
                      const SolverConfig& cfg);

/// With A = FFT(Z - L2/mu2): Y = A off the mask and
/// Y = (mu1 (Y0 + L1/mu1) + mu2 A) / (mu1 + mu2) on it.
ComplexImage update_y(const SolverState& state, const ComplexImage& y0,
                      const SamplingMask& mask, const TransformPlan& plan,
                      const SolverConfig& cfg);

/// Returns (L1 - mu1 P.*(Y - Y0), L2 - mu2 (Z - IFFT(Y))).
std::pair<ComplexImage, ComplexImage> update_duals(const SolverState& state,
                                                   const ComplexImage& y0,
                                                   const SamplingMask& mask,
                                                   const TransformPlan& plan,
                                                   const SolverConfig& cfg);

struct IterationResiduals {
  double objective = 0;
  double r1 = 0;
  double r2 = 0;
};

/// One full ADMM sweep in place (Z, then Y, then both multipliers),
/// sharing FFTs through state.x. Throws DivergenceError if any iterate
/// turns non-finite.
IterationResiduals admm_iteration(SolverState& state, const ComplexImage& y0,
                                  const SamplingMask& mask, const TransformPlan& plan,
                                  const SolverConfig& cfg);

struct ReconResult {
  ComplexImage image;
  ReconReport report;
};

/// Runs ADMM from the zero-filled start until both relative residuals
/// drop below cfg.tol or max_iters is reached. Entries of y0 off the
/// mask are discarded. PSNR is traced when a reference is given.
ReconResult reconstruct(const ComplexImage& y0, const SamplingMask& mask,
                        const SolverConfig& cfg,
                        const std::optional<ComplexImage>& reference = std::nullopt);

}  // namespace csmri
