// Acceptance gate: one line per criterion, exit 0 iff all pass.
#include <cstdio>
#include <string>

#include "fastcv/bench.hpp"
#include "fastcv/metrics.hpp"
#include "fastcv/verify.hpp"

namespace {

int failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("criterion %d %-34s %s  (%s)\n", criterion, name.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void report(int criterion, const fastcv::PropertyReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "max_deviation=%.3g tolerance=%.3g%s%s",
                r.max_deviation, r.tolerance, r.detail.empty() ? "" : "; ",
                r.detail.c_str());
  report(criterion, r.name, r.pass, buf);
}

double rel_eff(fastcv::BenchTask task, int p, std::uint64_t seed,
               double* perf_gap) {
  fastcv::BenchCell cell;
  cell.task = task;
  cell.n_samples = 100;
  cell.n_features = p;
  cell.n_classes = task == fastcv::BenchTask::binary ? 2 : 5;
  cell.n_folds = 10;
  cell.n_permutations = 100;
  auto [standard, analytic] = fastcv::run_bench_cell(cell, seed);
  if (standard.error || analytic.error) {
    *perf_gap = 1.0;
    return -1e9;
  }
  *perf_gap =
      std::abs(standard.performance_mean - analytic.performance_mean);
  return fastcv::relative_efficiency(standard.wall_time_seconds,
                                     analytic.wall_time_seconds);
}

}  // namespace

int main() {
  fastcv::VerifyOptions opt;
  opt.seed = 1;

  report(1, fastcv::check_binary_oracle_equivalence(opt));
  report(2, fastcv::check_bias_adjustment_sign_agreement(opt));
  report(3, fastcv::check_multiclass_label_equivalence(opt));
  report(4, fastcv::check_os_lda_full_data_identity(opt));
  report(5, fastcv::check_permutation_path_equality(opt));

  {
    auto lemma = fastcv::check_lemma1_eigen_structure(opt);
    auto app_a = fastcv::check_appendix_a_collinearity(opt);
    auto app_b = fastcv::check_appendix_b_ridge_correspondence(opt);
    auto shrink = fastcv::check_shrinkage_ridge_direction(opt);
    bool pass = lemma.pass && app_a.pass && app_b.pass && shrink.pass;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "lemma1=%.3g appendix_a=%.3g appendix_b=%.3g shrinkage=%.3g"
                  " (tol 1e-8 each)",
                  lemma.max_deviation, app_a.max_deviation, app_b.max_deviation,
                  shrink.max_deviation);
    report(6, "appendix_suite", pass, buf);
  }

  {
    double gap_b1000, gap_b10, gap_m1000;
    double re_b1000 = rel_eff(fastcv::BenchTask::binary, 1000, 1, &gap_b1000);
    double re_b10 = rel_eff(fastcv::BenchTask::binary, 10, 1, &gap_b10);
    double re_m1000 =
        rel_eff(fastcv::BenchTask::multiclass, 1000, 1, &gap_m1000);
    bool pass = re_b1000 >= 1.0 && re_m1000 >= 1.0 &&
                re_b1000 - re_b10 >= 1.0 && gap_b1000 <= 1e-8 &&
                gap_b10 <= 1e-8 && gap_m1000 <= 1e-8;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "binary P=1000: %.2f, P=10: %.2f, multiclass P=1000: %.2f; "
                  "perf gaps %.1e/%.1e/%.1e",
                  re_b1000, re_b10, re_m1000, gap_b1000, gap_b10, gap_m1000);
    report(7, "performance_reproduction", pass, buf);
  }

  report(8, fastcv::check_statistical_sanity(opt));

  return failures == 0 ? 0 : 1;
}
