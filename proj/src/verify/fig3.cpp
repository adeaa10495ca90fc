#include "qrl/verify/fig3.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "qrl/errors.hpp"
#include "qrl/stats/summary.hpp"
#include "qrl/stats/thresholds.hpp"

namespace qrl::verify {

namespace {

constexpr std::uint64_t kWindow = 50;

// 50-epoch trailing moving average of the curve means, defined from epoch 50.
std::vector<double> moving_average(const std::vector<stats::CurvePoint>& curve) {
  std::vector<double> out(curve.size(), 0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    s += curve[i].mean_reward;
    if (i >= kWindow) s -= curve[i - kWindow].mean_reward;
    out[i] = i + 1 >= kWindow ? s / kWindow : 0.0;
  }
  return out;
}

// First epoch whose moving average reaches `level`, or 0 if none does.
std::uint64_t first_reaching(const std::vector<double>& ma, double level) {
  for (std::size_t i = kWindow - 1; i < ma.size(); ++i) {
    if (ma[i] >= level) return i + 1;
  }
  return 0;
}

stats::CheckResult above_check(std::string name, const std::vector<stats::CurvePoint>& c,
                               const std::vector<stats::CurvePoint>& h, std::uint64_t end) {
  double worst = INFINITY;
  std::uint64_t worst_epoch = 0;
  std::uint64_t below = 0;
  for (std::uint64_t e = 1; e <= end; ++e) {
    const double se = std::hypot(c[e - 1].stderr, h[e - 1].stderr);
    if (se == 0.0) continue;
    const double z = (h[e - 1].mean_reward - c[e - 1].mean_reward) / se;
    if (z < -stats::kCurveSigmas) ++below;
    if (z < worst) {
      worst = z;
      worst_epoch = e;
    }
  }
  stats::CheckResult a;
  a.name = std::move(name);
  a.measured = worst;
  a.bound = -stats::kCurveSigmas;
  a.sigma_margin = worst + stats::kCurveSigmas;
  a.pass = below == 0;
  a.extra = {{"learning_phase_end", static_cast<double>(end)},
             {"worst_epoch", static_cast<double>(worst_epoch)},
             {"epochs_below", static_cast<double>(below)}};
  return a;
}

}  // namespace

cli::RunConfig fig3_config(const Fig3Options& opt) {
  cli::RunConfig cfg;
  cfg.env.layers = 12;
  cfg.env.reward_exponent = 5;
  cfg.env.path_seed = splitmix64(opt.seed);
  cfg.agent.beta = {0.01, 0.1};
  cfg.run.modes = {cli::AgentMode::classical, cli::AgentMode::hybrid};
  cfg.run.agents = opt.agents;
  cfg.run.seed = opt.seed;
  cfg.stop.epoch_budget = opt.horizon;
  cfg.output.accounting = opt.accounting;
  cfg.output.dir = "fig3";
  return cfg;
}

std::vector<Fig3Run> run_fig3(const Fig3Options& opt) {
  const cli::RunConfig cfg = fig3_config(opt);
  cli::validate(cfg);
  const auto env = cli::make_environment(cfg.env);
  const std::uint64_t tail_first = opt.horizon - opt.horizon / 5 + 1;
  std::vector<Fig3Run> runs;
  for (double beta : cfg.agent.beta) {
    Fig3Run r;
    r.beta = beta;
    const cli::SimulateOptions so{opt.workers, 32, tail_first};
    r.classical = cli::run_variant(cfg, {beta, cli::AgentMode::classical, {}}, *env, so);
    r.hybrid = cli::run_variant(cfg, {beta, cli::AgentMode::hybrid, {}}, *env, so);
    cli::RunConfig alt = cfg;
    alt.output.accounting = stats::CurveAccounting::unamplified_only;
    r.hybrid_unamplified = cli::run_variant(alt, {beta, cli::AgentMode::hybrid, {}}, *env, {opt.workers, 32, {}});
    runs.push_back(std::move(r));
  }
  return runs;
}

Checks fig3_evaluate(const std::vector<Fig3Run>& runs, std::uint64_t horizon) {
  if (runs.size() != 2) throw ContractViolation("expected two beta values");
  Checks out;
  struct Plateau {
    double mean, se;
  };
  auto plateau = [](const cli::VariantResult& v) {
    const auto ms = stats::mean_std(v.tail_means);
    return Plateau{ms.mean, ms.stderr_mean()};
  };
  std::vector<Plateau> classical_plateau, hybrid_plateau;
  std::vector<std::uint64_t> classical_half, hybrid_half;
  for (const auto& r : runs) {
    const std::string tag = "_beta" + stats::format_double(r.beta);
    const auto& c = r.classical.curve;
    const auto& h = r.hybrid.curve;
    const Plateau pc = plateau(r.classical), ph = plateau(r.hybrid);
    classical_plateau.push_back(pc);
    hybrid_plateau.push_back(ph);
    const auto ma_c = moving_average(c);
    const auto ma_h = moving_average(h);
    classical_half.push_back(first_reaching(ma_c, 0.5 * pc.mean));
    hybrid_half.push_back(first_reaching(ma_h, 0.5 * ph.mean));

    // (a)
    const std::uint64_t learn_end = first_reaching(ma_c, 0.9 * pc.mean);
    const std::uint64_t end = learn_end == 0 ? horizon : learn_end;
    out.push_back(above_check("fig3_hybrid_above_classical" + tag, c, h, end));
    out.push_back(above_check("fig3_hybrid_above_classical_unamplified_axis" + tag, c, r.hybrid_unamplified.curve,
                              end));

    // (b)
    auto b = stats::equality_check("fig3_plateau_agreement" + tag, ph.mean, ph.se, pc.mean, pc.se, stats::kCurveSigmas);
    out.push_back(b);
  }

  // (c) runs[0] is beta = 0.01, runs[1] is beta = 0.1
  for (int mode = 0; mode < 2; ++mode) {
    const auto& half = mode == 0 ? classical_half : hybrid_half;
    const auto& pl = mode == 0 ? classical_plateau : hybrid_plateau;
    const std::string tag = mode == 0 ? "_classical" : "_hybrid";
    stats::CheckResult rise;
    rise.name = "fig3_exploitative_rises_faster" + tag;
    rise.measured = static_cast<double>(half[1]);
    rise.bound = static_cast<double>(half[0]);
    rise.sigma_margin = static_cast<double>(half[0]) - static_cast<double>(half[1]);
    rise.pass = half[1] > 0 && half[0] > 0 && half[1] < half[0];
    out.push_back(rise);
    const double se = std::hypot(pl[0].se, pl[1].se);
    stats::CheckResult lower;
    lower.name = "fig3_exploitative_plateau_lower" + tag;
    lower.measured = pl[1].mean;
    lower.bound = pl[0].mean;
    lower.sigma_margin = (pl[0].mean - pl[1].mean) / se;
    lower.pass = lower.sigma_margin > stats::kCurveSigmas;
    out.push_back(lower);
  }
  return out;
}

Checks fig3_checks(const Fig3Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  Checks out = fig3_evaluate(run_fig3(opt), opt.horizon);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.push_back(runtime_check("fig3_runtime_s", elapsed, 7200.0));
  return out;
}

}  // namespace qrl::verify
