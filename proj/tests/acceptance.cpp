// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Each criterion pins its tolerances in code and checks its runtime budget.

#include <omp.h>

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cohwalk/band.hpp"
#include "cohwalk/coherent.hpp"
#include "cohwalk/experiment.hpp"
#include "cohwalk/fock.hpp"
#include "cohwalk/walk.hpp"

using namespace cohwalk;
using cohwalk::cd;

namespace {

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> check;
};

WalkSpec make_spec(double t1, double t2, int steps, Spinor spin = {cd{1, 0}, cd{0, 0}},
                   int pos = 0, double phi = 0.0) {
  WalkSpec s;
  s.angles = {t1, t2};
  s.steps = steps;
  s.initial_spin = spin;
  s.initial_position = pos;
  s.phi = phi;
  return s;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// --- 1: phase diagram ------------------------------------------------------
bool phase_diagram(std::string& detail) {
  const KGrid grid{1024, true};
  int evaluated = 0, wrong = 0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double t1 = M_PI * i / 49.0, t2 = M_PI * j / 49.0;
      if (std::abs(std::abs(std::tan(t1)) - std::abs(std::tan(t2))) < 0.05) continue;
      const int expect = std::abs(std::tan(t1) / std::tan(t2)) > 1.0 ? 2 : 0;
      int got = -1;
      try {
        got = winding_number({t1, t2}, grid);
      } catch (const GapClosedError&) {
      }
      ++evaluated;
      if (got != expect) ++wrong;
    }
  }
  detail = std::to_string(evaluated) + " gapped grid points, " + std::to_string(wrong) +
           " misclassified";
  return wrong == 0 && evaluated > 2000;
}

// --- 2: band consistency ----------------------------------------------------
bool band_consistency(std::string& detail) {
  const double thetas[5] = {0.3, 0.7, 1.1, 1.9, 2.7};
  double worst_phase = 0.0, worst_chiral = 0.0;
  for (double t1 : thetas) {
    for (double t2 : thetas) {
      const CoinAngles a{t1, t2};
      const Eigen::Vector3d axis = chiral_axis(t1);
      for (int j = 0; j < 1000; ++j) {
        const double k = -M_PI + (j + 0.5) * 2.0 * M_PI / 1000.0;
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(momentum_step_matrix(k, a));
        const double eps = quasienergy(k, a);
        for (int b = 0; b < 2; ++b)
          worst_phase = std::max(worst_phase, std::abs(std::abs(std::arg(es.eigenvalues()(b))) - eps));
        if (band_gap(k, a) > 1e-6)
          worst_chiral = std::max(worst_chiral, std::abs(bloch_vector(k, a).dot(axis)));
      }
    }
  }
  detail = "max eigenphase err " + fmt(worst_phase) + ", max |n.A| " + fmt(worst_chiral);
  return worst_phase < 1e-10 && worst_chiral < 1e-10;
}

// --- 3: M2 convergence ------------------------------------------------------
bool m2_convergence(std::string& detail) {
  const KGrid grid{2048, true};
  double worst = 0.0;
  bool improving = true;
  for (double t2 : {M_PI / 8, 3 * M_PI / 8, 5 * M_PI / 8, 7 * M_PI / 8}) {
    const CoinAngles a{M_PI / 4, t2};
    const double l = ballistic_coefficient(a, grid);
    const double dev25 =
        std::abs(moment(distribution(evolve(make_spec(M_PI / 4, t2, 25))), 2) / 625.0 - l);
    const double dev50 =
        std::abs(moment(distribution(evolve(make_spec(M_PI / 4, t2, 50))), 2) / 2500.0 - l);
    worst = std::max(worst, dev50);
    improving = improving && dev50 < dev25;
  }
  detail = "max |M2/N^2 - L| at N=50: " + fmt(worst) + (improving ? ", improving" : ", NOT improving");
  return worst <= 0.05 && improving;
}

// --- 4: topological plateau -------------------------------------------------
bool topological_plateau(std::string& detail) {
  const KGrid grid{4096, true};
  const Spinor coin = chiral_spinor(M_PI / 4, -1);
  double worst_plateau = 0.0, worst_asym = 0.0;
  for (double t2 : {M_PI / 8, 7 * M_PI / 8}) {
    const double m1 = moment(distribution(evolve(make_spec(M_PI / 4, t2, 50, coin))), 1);
    worst_plateau = std::max(worst_plateau, std::abs(std::abs(m1) - 1.0));
    worst_asym = std::max(worst_asym, std::abs(m1_asymptotic(50, {M_PI / 4, t2}, -1, grid) - m1));
  }
  for (double t2 : {3 * M_PI / 8, M_PI / 2, 5 * M_PI / 8}) {
    const double m1 = moment(distribution(evolve(make_spec(M_PI / 4, t2, 50, coin))), 1);
    worst_plateau = std::max(worst_plateau, std::abs(m1));
    worst_asym = std::max(worst_asym, std::abs(m1_asymptotic(50, {M_PI / 4, t2}, -1, grid) - m1));
  }
  detail = "max plateau deviation " + fmt(worst_plateau) + ", max closed-form gap " + fmt(worst_asym);
  return worst_plateau <= 0.1 && worst_asym <= 0.05;
}

// --- 5: I(m) structure ------------------------------------------------------
bool cross_moment_structure(std::string& detail) {
  const WalkState probe = evolve(make_spec(M_PI / 4, 0.9, 20));
  for (int m : {1, 3, 5, 7})
    if (script_I(probe, m, 20) != 0.0) {
      detail = "odd I(m) nonzero";
      return false;
    }
  std::vector<double> i2(100);
  for (int j = 0; j < 100; ++j) {
    const double t2 = M_PI * j / 99.0;
    i2[static_cast<std::size_t>(j)] =
        std::abs(script_I(evolve(make_spec(M_PI / 4, t2, 20)), 2, 20));
  }
  std::vector<int> maxima;
  for (int j = 1; j < 99; ++j)
    if (i2[j] > i2[j - 1] && i2[j] > i2[j + 1]) maxima.push_back(j);
  std::sort(maxima.begin(), maxima.end(), [&](int a, int b) { return i2[a] > i2[b]; });
  if (maxima.size() < 2) {
    detail = "fewer than two local maxima";
    return false;
  }
  const double spacing = M_PI / 99.0;
  const double a = M_PI * maxima[0] / 99.0, b = M_PI * maxima[1] / 99.0;
  const double da = std::min(std::abs(a - M_PI / 4), std::abs(a - 3 * M_PI / 4));
  const double db = std::min(std::abs(b - M_PI / 4), std::abs(b - 3 * M_PI / 4));
  const bool both_covered =
      (std::abs(a - M_PI / 4) < std::abs(a - 3 * M_PI / 4)) !=
      (std::abs(b - M_PI / 4) < std::abs(b - 3 * M_PI / 4));
  detail = "pinnacles at theta2 = " + fmt(a) + ", " + fmt(b);
  return da <= spacing && db <= spacing && both_covered;
}

// --- 6: oracle equivalence --------------------------------------------------
bool oracle_equivalence(std::string& detail) {
  const double alphas[3] = {0.4, 0.8, 1.5};
  const double phis[3] = {0.0, M_PI / 8, 3 * M_PI / 8};
  const double theta2s[2] = {M_PI / 8, M_PI / 2};
  const Spinor coins[2] = {Spinor{cd{1, 0}, cd{0, 0}}, chiral_spinor(M_PI / 4, -1)};

  struct Job {
    int n;
    double alpha, phi, t2;
    int coin;
  };
  std::vector<Job> jobs;
  for (int n = 1; n <= 8; ++n)
    for (double alpha : alphas)
      for (double phi : phis)
        for (double t2 : theta2s)
          for (int c = 0; c < 2; ++c) jobs.push_back({n, alpha, phi, t2, c});

  std::vector<double> photon_diff(jobs.size()), prob_diff(jobs.size());
  bool aborted = false;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(jobs.size()); ++idx) {
    const Job& job = jobs[static_cast<std::size_t>(idx)];
    try {
      const WalkSpec spec =
          make_spec(M_PI / 4, job.t2, job.n, coins[job.coin], 0, job.phi);
      WalkSpec sizing = spec;
      sizing.steps = 8;  // one Fock space per alpha, sized for the largest N
      const FockSpace space = fock_space_for(sizing, job.alpha);
      const QubitCavityState fock = run_walk_fock(spec, job.alpha, space);

      WalkSpec flat = spec;
      flat.phi = 0.0;
      const double closed = photon_number_twisted(evolve(flat), job.alpha, job.phi);
      photon_diff[static_cast<std::size_t>(idx)] = std::abs(expected_photons(fock) - closed);

      const WalkState twisted = evolve(spec);
      const CoherentWalkState cs{twisted, {job.alpha, job.phi}};
      double worst = 0.0;
      const double norm = fock.norm_sq();
      for (int x = twisted.min_position; x <= twisted.max_position(); ++x) {
        const Eigen::VectorXcd site = coherent_vector(cd{x * job.alpha, 0.0}, space);
        const double p =
            (std::norm(site.dot(fock.amps.segment(0, space.dim))) +
             std::norm(site.dot(fock.amps.segment(space.dim, space.dim)))) /
            norm;
        worst = std::max(worst, std::abs(p - projective_probability(cs, x)));
      }
      prob_diff[static_cast<std::size_t>(idx)] = worst;
    } catch (const std::exception&) {
      aborted = true;
    }
  }
  if (aborted) {
    detail = "oracle run aborted";
    return false;
  }
  double wp = 0.0, wq = 0.0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    wp = std::max(wp, photon_diff[i]);
    wq = std::max(wq, prob_diff[i]);
  }
  detail = std::to_string(jobs.size()) + " runs, max photon diff " + fmt(wp) +
           ", max probability diff " + fmt(wq);
  return wp < 1e-6 && wq < 1e-8;
}

// --- 7: gate compilation ----------------------------------------------------
bool gate_compilation(std::string& detail) {
  double worst_fidelity = 1.0, worst_opdiff = 0.0;
  for (double alpha : {0.4, 0.8, 1.5}) {
    const double mu = 7 * alpha * 7 * alpha;
    const FockSpace space{static_cast<int>(std::ceil(mu + 10 * std::sqrt(mu) + 20))};
    const GateSequence plain = compile_translation(alpha, false);
    const GateSequence echo = compile_translation(alpha, true);
    worst_fidelity = std::min(worst_fidelity, sequence_fidelity(plain, alpha, -6, 6, space));
    worst_fidelity = std::min(worst_fidelity, sequence_fidelity(echo, alpha, -6, 6, space));
    worst_opdiff = std::max(
        worst_opdiff,
        (sequence_matrix(plain, space) - sequence_matrix(echo, space)).cwiseAbs().maxCoeff());
  }
  detail = "min fidelity 1 - " + fmt(1.0 - worst_fidelity) + ", echo operator diff " +
           fmt(worst_opdiff);
  return worst_fidelity >= 1.0 - 1e-8 && worst_opdiff <= 1e-10;
}

// --- 8: reconstruction ------------------------------------------------------
bool reconstruction(std::string& detail) {
  const WalkState s = evolve(make_spec(M_PI / 4, M_PI / 8, 6));
  const PositionDistribution truth = distribution(s);
  ReadoutSeries series;
  for (double alpha : {0.8, 1.0, 1.2, 1.4, 1.6}) {
    const CoherentWalkState cs{s, {alpha, 0.0}};
    for (int x = s.min_position; x <= s.max_position(); x += 2)
      series.push_back({alpha, x, projective_probability(cs, x)});
  }
  const ReconstructionResult rec = reconstruct_distribution(series, 4);
  double worst = 0.0;
  for (const auto& [x, p] : rec.dist) worst = std::max(worst, std::abs(p - truth.at(x)));
  detail = "max site error " + fmt(worst);
  return worst <= 1e-3;
}

// --- 9: large-alpha proportionality ----------------------------------------
bool large_alpha(std::string& detail) {
  double worst = 0.0;
  for (int j = 0; j < 50; ++j) {
    const double t2 = M_PI * j / 49.0;
    const WalkState s = evolve(make_spec(M_PI / 4, t2, 20));
    const double m2 = moment(distribution(s), 2);
    worst = std::max(worst, std::abs(photon_number({s, {3.0, 0.0}}) / 9.0 - m2));
  }
  detail = "max |Nw/alpha^2 - M2| " + fmt(worst);
  return worst <= 1e-3;
}

// --- 10: twist-pair identities ----------------------------------------------
bool twist_pair(std::string& detail) {
  const double alpha = 0.4;
  double worst_excess = 0.0;
  for (int j = 0; j < 50; ++j) {
    const double t2 = M_PI * j / 49.0;
    const WalkState s = evolve(make_spec(M_PI / 4, t2, 20));
    const double m2 = moment(distribution(s), 2);
    const TwistPair p = summed_and_differenced(s, alpha);
    const double excess =
        std::abs(p.tilde - 2.0 * alpha * alpha * m2) - coherent_tail_bound(s, alpha, 6);
    worst_excess = std::max(worst_excess, excess);
  }

  const Spinor coin = chiral_spinor(M_PI / 4, -1);
  double worst_plateau = 0.0;
  for (double t2 : {M_PI / 8, M_PI / 2, 7 * M_PI / 8}) {
    WalkSpec plus = make_spec(M_PI / 4, t2, 30, coin, 2);
    WalkSpec minus = plus;
    minus.initial_position = -2;
    const double ratio = shifted_pair_delta(plus, minus, alpha, true) / (8.0 * 2.0 * alpha * alpha);
    const double target = (t2 == M_PI / 2) ? 0.0 : 1.0;
    worst_plateau = std::max(worst_plateau, std::abs(ratio - target));
  }
  detail = "tail-bound excess " + fmt(worst_excess) + ", plateau deviation " + fmt(worst_plateau);
  return worst_excess <= 1e-12 && worst_plateau <= 0.15;
}

// --- 11: invariant suite ----------------------------------------------------
bool invariant_suite(std::string& detail) {
  std::ostringstream why;
  bool ok = true;

  // unitarity + parity + reality across a spec set
  for (double t2 : {0.2, M_PI / 8, 1.3, 2.9}) {
    for (const Spinor spin : {Spinor{cd{1, 0}, cd{0, 0}}, chiral_spinor(M_PI / 4, -1)}) {
      const WalkState s = evolve(make_spec(M_PI / 4, t2, 15, spin));
      if (std::abs(s.norm_sq() - 1.0) > 1e-12) { ok = false; why << "unitarity "; }
      for (int x = s.min_position; x <= s.max_position(); ++x) {
        if (((x % 2) + 2) % 2 == 1 && s.amplitude(x).norm_sq() != 0.0) { ok = false; why << "parity "; }
        const cd pu = std::conj(s.amplitude(x).up) * s.amplitude(x + 2).up;
        const cd pd = std::conj(s.amplitude(x).down) * s.amplitude(x + 2).down;
        if (std::abs(pu.imag()) > 1e-12 || std::abs(pd.imag()) > 1e-12) { ok = false; why << "reality "; }
      }
    }
  }

  // phase factorization
  {
    const double phi = M_PI / 8;
    const WalkState flat = evolve(make_spec(M_PI / 4, M_PI / 8, 10));
    const WalkState tw = evolve(make_spec(M_PI / 4, M_PI / 8, 10, {cd{1, 0}, cd{0, 0}}, 0, phi));
    for (int x = flat.min_position; x <= flat.max_position(); ++x) {
      const cd f = std::exp(cd{0.0, -phi * x});
      if (std::abs(tw.amplitude(x).up - f * flat.amplitude(x).up) > 1e-12 ||
          std::abs(tw.amplitude(x).down - f * flat.amplitude(x).down) > 1e-12) {
        ok = false;
        why << "twist-factorization ";
        break;
      }
    }
  }

  // Gram positivity
  for (double alpha : {0.8, 1.5}) {
    Eigen::MatrixXd g(13, 13);
    for (int i = 0; i < 13; ++i)
      for (int j = 0; j < 13; ++j) g(i, j) = coherent_overlap(2 * i, 2 * j, alpha);
    if (Eigen::LLT<Eigen::MatrixXd>(g).info() != Eigen::Success) { ok = false; why << "gram "; }
  }

  // determinism: bitwise repeatable evolution and byte-identical CSV
  {
    const WalkState a = evolve(make_spec(M_PI / 4, M_PI / 8, 25, chiral_spinor(M_PI / 4, 1)));
    const WalkState b = evolve(make_spec(M_PI / 4, M_PI / 8, 25, chiral_spinor(M_PI / 4, 1)));
    for (std::size_t i = 0; i < a.amps.size(); ++i)
      if (a.amps[i].up != b.amps[i].up || a.amps[i].down != b.amps[i].down) {
        ok = false;
        why << "evolve-determinism ";
        break;
      }
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::CssSweep;
    cfg.theta2 = {0.3, 1.9};
    cfg.steps = {6};
    cfg.alphas = {0.8};
    cfg.k_grid = 256;
    const ResultTable t1 = run(cfg);
    cfg.workers = 3;
    const ResultTable t2 = run(cfg);
    cfg.workers = 0;
    write_csv(t1, cfg, "/tmp/cohwalk_acc_a.csv");
    write_csv(t2, cfg, "/tmp/cohwalk_acc_b.csv");
    auto slurp = [](const char* p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    if (slurp("/tmp/cohwalk_acc_a.csv") != slurp("/tmp/cohwalk_acc_b.csv")) {
      ok = false;
      why << "csv-determinism ";
    }
    std::remove("/tmp/cohwalk_acc_a.csv");
    std::remove("/tmp/cohwalk_acc_b.csv");
  }

  detail = ok ? "unitarity, parity, reality, twist, gram, determinism" : why.str();
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"phase diagram winding classification", 10.0, phase_diagram},
      {"band consistency (eigenphases, chirality)", 5.0, band_consistency},
      {"M2/N^2 convergence to L", 10.0, m2_convergence},
      {"topological plateau of M1", 10.0, topological_plateau},
      {"I(m) parity and pinnacles", 10.0, cross_moment_structure},
      {"fock-oracle equivalence", 120.0, oracle_equivalence},
      {"gate compilation fidelity and echo identity", 30.0, gate_compilation},
      {"readout reconstruction", 5.0, reconstruction},
      {"large-alpha proportionality", 10.0, large_alpha},
      {"twist-pair identities", 30.0, twist_pair},
      {"invariant suite", 60.0, invariant_suite},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed < criteria[i].budget_seconds;
    if (!in_budget) detail += " [over " + fmt(criteria[i].budget_seconds) + " s budget]";
    const bool pass = ok && in_budget;
    std::printf("[%s] criterion %2zu: %s (%.2f s) -- %s\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name.c_str(), elapsed, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
