#include "csmri/solver.hpp"

#include <chrono>
#include <cmath>

#include "csmri/kernels.hpp"
#include "csmri/metrics.hpp"

namespace csmri {

void SolverConfig::validate() const {
  if (!(mu1 > 0) || !std::isfinite(mu1))
    throw std::invalid_argument("SolverConfig: mu1 must be positive");
  if (!(mu2 > 0) || !std::isfinite(mu2))
    throw std::invalid_argument("SolverConfig: mu2 must be positive");
  if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  if (!(tol >= 0)) throw std::invalid_argument("SolverConfig: tol must be nonnegative");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_iters: return "max_iters";
    case Termination::unconstrained: return "unconstrained";
  }
  return "unknown";
}

DivergenceError::DivergenceError(int iteration, const std::string& which)
    : std::runtime_error("ADMM diverged: non-finite values in " + which + " at iteration " +
                         std::to_string(iteration)),
      iteration_(iteration) {}

cplx soft_threshold(cplx a, double lambda) { return kernels::soft(a, lambda); }

SolverState make_initial_state(const ComplexImage& y0_masked, const TransformPlan& plan,
                               Exec exec) {
  SolverState s;
  s.y = y0_masked;
  s.x = plan.inverse(s.y, exec);
  s.z = s.x;
  s.l1 = ComplexImage(y0_masked.shape());
  s.l2 = ComplexImage(y0_masked.shape());
  return s;
}

namespace {

void require_consistent(const SolverState& s, const ComplexImage& y0, const SamplingMask& mask,
                        const TransformPlan& plan) {
  const Shape shape = mask.shape();
  require_same_shape("solver: y0", y0.shape(), shape);
  require_same_shape("solver: plan", plan.shape(), shape);
  require_same_shape("solver: Y", s.y.shape(), shape);
  require_same_shape("solver: Z", s.z.shape(), shape);
  require_same_shape("solver: L1", s.l1.shape(), shape);
  require_same_shape("solver: L2", s.l2.shape(), shape);
}

}  // namespace

ComplexImage update_z(const SolverState& state, const TransformPlan& plan,
                      const SolverConfig& cfg) {
  const ComplexImage x = plan.inverse(state.y, cfg.exec);
  require_same_shape("update_z", x.shape(), state.l2.shape());
  ComplexImage z(x.shape());
  kernels::table(cfg.exec).shrink(x.data(), state.l2.data(), cfg.mu2, z.data());
  return z;
}

ComplexImage update_y(const SolverState& state, const ComplexImage& y0,
                      const SamplingMask& mask, const TransformPlan& plan,
                      const SolverConfig& cfg) {
  require_consistent(state, y0, mask, plan);
  const auto& k = kernels::table(cfg.exec);
  ComplexImage a(mask.shape());
  k.shift_by_multiplier(state.z.data(), state.l2.data(), cfg.mu2, a.data());
  plan.forward(a, a, cfg.exec);
  ComplexImage y(mask.shape());
  k.blend_kspace(a.data(), y0.data(), state.l1.data(), mask.indicator(), cfg.mu1, cfg.mu2,
                 y.data());
  return y;
}

std::pair<ComplexImage, ComplexImage> update_duals(const SolverState& state,
                                                   const ComplexImage& y0,
                                                   const SamplingMask& mask,
                                                   const TransformPlan& plan,
                                                   const SolverConfig& cfg) {
  require_consistent(state, y0, mask, plan);
  const ComplexImage x = plan.inverse(state.y, cfg.exec);
  ComplexImage l1 = state.l1;
  ComplexImage l2 = state.l2;
  kernels::table(cfg.exec).ascend_duals(state.y.data(), y0.data(), mask.indicator(),
                                        state.z.data(), x.data(), cfg.mu1, cfg.mu2,
                                        l1.data(), l2.data());
  return {std::move(l1), std::move(l2)};
}

IterationResiduals admm_iteration(SolverState& state, const ComplexImage& y0,
                                  const SamplingMask& mask, const TransformPlan& plan,
                                  const SolverConfig& cfg) {
  require_consistent(state, y0, mask, plan);
  require_same_shape("solver: X", state.x.shape(), mask.shape());
  const auto& k = kernels::table(cfg.exec);
  const int iter = state.iter + 1;

  k.shrink(state.x.data(), state.l2.data(), cfg.mu2, state.z.data());
  if (!k.all_finite(state.z.data())) throw DivergenceError(iter, "Z");

  ComplexImage a(mask.shape());
  k.shift_by_multiplier(state.z.data(), state.l2.data(), cfg.mu2, a.data());
  plan.forward(a, a, cfg.exec);
  k.blend_kspace(a.data(), y0.data(), state.l1.data(), mask.indicator(), cfg.mu1, cfg.mu2,
                 state.y.data());
  if (!k.all_finite(state.y.data())) throw DivergenceError(iter, "Y");

  plan.inverse(state.y, state.x, cfg.exec);
  k.ascend_duals(state.y.data(), y0.data(), mask.indicator(), state.z.data(),
                 state.x.data(), cfg.mu1, cfg.mu2, state.l1.data(), state.l2.data());
  if (!k.all_finite(state.l1.data())) throw DivergenceError(iter, "L1");
  if (!k.all_finite(state.l2.data())) throw DivergenceError(iter, "L2");

  const auto res =
      k.residuals(state.y.data(), y0.data(), mask.indicator(), state.z.data(), state.x.data());
  state.iter = iter;
  return {k.sum_abs(state.z.data()), std::sqrt(res.data), std::sqrt(res.coupling)};
}

ReconResult reconstruct(const ComplexImage& y0, const SamplingMask& mask,
                        const SolverConfig& cfg, const std::optional<ComplexImage>& reference) {
  cfg.validate();
  require_same_shape("reconstruct", y0.shape(), mask.shape());
  if (reference) require_same_shape("reconstruct: reference", reference->shape(), mask.shape());

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  const TransformPlan plan(mask.shape());
  const ComplexImage y0m = mask_apply(y0, mask, cfg.exec);
  if (!y0m.all_finite()) throw std::invalid_argument("reconstruct: k-space data is not finite");
  SolverState state = make_initial_state(y0m, plan, cfg.exec);
  const double scale = frobenius_norm(y0m, cfg.exec);

  ReconReport report;
  if (reference) report.initial_psnr = psnr(*reference, state.x);
  if (cfg.record_trace) report.records.reserve(static_cast<std::size_t>(cfg.max_iters));

  report.termination = Termination::max_iters;
  for (int it = 0; it < cfg.max_iters; ++it) {
    const IterationResiduals res = admm_iteration(state, y0m, mask, plan, cfg);
    if (cfg.record_trace) {
      IterationRecord rec;
      rec.iter = state.iter;
      rec.objective = res.objective;
      rec.r1 = res.r1;
      rec.r2 = res.r2;
      if (reference) rec.psnr = psnr(*reference, state.x);
      rec.seconds = std::chrono::duration<double>(clock::now() - start).count();
      report.records.push_back(rec);
    }
    if (res.r1 <= cfg.tol * scale && res.r2 <= cfg.tol * scale) {
      report.termination = Termination::converged;
      break;
    }
  }
  if (mask.sample_count() == 0) report.termination = Termination::unconstrained;

  report.iterations = state.iter;
  if (reference) report.final_psnr = psnr(*reference, state.x);
  report.image = state.x;
  return {std::move(state.x), std::move(report)};
}

}  // namespace csmri
