#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "nodalab/dividing.hpp"
#include "oracles.hpp"

using namespace nodalab;

namespace {
DividingConfig make_cfg(int A, double M0, double R, int max_gen) {
  DividingConfig cfg;
  cfg.A = A;
  cfg.M0 = M0;
  cfg.R = R;
  cfg.origin = {-0.5 * R, 0.0, -0.5 * R};
  cfg.max_generations = max_gen;
  return cfg;
}

// n-choose-k on doubles, small arguments only (cross-check helper).
double choose_d(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * double(n - k + i) / double(i);
  return v;
}
}  // namespace

TEST_SUITE("dividing") {

TEST_CASE("kappa and k0: exact closed forms") {
  const DividingConfig c3 = make_cfg(3, 1.5, 0.1, 8);
  CHECK(c3.kappa() == 17.0 / 18.0);  // 1 - 1/(2 A^2), exact in binary? no:
  // 17/18 is not dyadic; require exactness of the *expression* instead
  CHECK(c3.kappa() == doctest::Approx(17.0 / 18.0).epsilon(1e-16));
  CHECK(make_cfg(5, 1.5, 0.1, 8).kappa() ==
        doctest::Approx(49.0 / 50.0).epsilon(1e-16));
  CHECK(c3.k0(18.0) == 4);  // floor(log2 12) + 1
  CHECK(c3.k0(1.5) == 0);   // already at the target bound: no layers needed
  CHECK(c3.k0(1.6) == 1);
  CHECK(c3.k0(3.1) == 2);
  CHECK(c3.descending_layers() == 3);  // all layers descend at desk scale
  CHECK(make_cfg(31, 1.5, 0.1, 1).descending_layers() == 30);
}

TEST_CASE("config gate and validation") {
  CHECK(make_cfg(3, 1.5, 0.1, 8).gate_satisfied());   // 3 >= 1.5^1.5
  CHECK(!make_cfg(3, 3.0, 0.1, 8).gate_satisfied());  // 3 < 3^3
  CHECK_THROWS_AS(make_cfg(4, 1.5, 0.1, 8).validate(),
                  std::invalid_argument);  // even A
  CHECK_THROWS_AS(make_cfg(3, 1.0, 0.1, 8).validate(),
                  std::invalid_argument);  // M0 <= 1
  CHECK_THROWS_AS(make_cfg(3, 1.5, -0.1, 8).validate(),
                  std::invalid_argument);
  CHECK_NOTHROW(make_cfg(9, 1.5, 0.05, 6).validate());
}

TEST_CASE("worst-case class counts match the binomial closed form") {
  // c_k(j) = C(k, j) (A^2 - 1)^{k-j} for all j <= k0, including the
  // absorbing class j = k0 (hockey-stick identity).
  for (int A : {3, 5}) {
    const int k0 = 4, k_max = A == 3 ? 20 : 10;
    const auto counts = worst_case_class_counts(A, k0, k_max);
    const double base = double(A) * A - 1.0;
    for (int k = 0; k <= k_max; ++k) {
      for (int j = 0; j <= k0 && j <= k; ++j) {
        const double expect = choose_d(k, j) * std::pow(base, k - j);
        if (expect < 9e18) {
          CHECK(double(counts[k][j]) ==
                doctest::Approx(expect).epsilon(1e-12));
        }
      }
    }
  }
  // exact spot checks at A = 3 (u64 arithmetic, no rounding)
  const auto c = worst_case_class_counts(3, 4, 20);
  CHECK(c[1][0] == 8);
  CHECK(c[1][1] == 1);
  CHECK(c[2][1] == 16);            // C(2,1) * 8
  CHECK(c[20][0] == 1152921504606846976ULL);  // 8^20
  CHECK(c[5][4] == 40);            // C(5,4) * 8
}

TEST_CASE("class counts overflow is detected, not wrapped") {
  CHECK_THROWS_AS(worst_case_class_counts(9, 3, 25), std::overflow_error);
}

TEST_CASE("counting tail: binomial term under kappa^k") {
  const TailCheck tc = counting_tail_check(3, 2, 60);
  CHECK(tc.ok);
  CHECK(tc.max_ratio <= 1.0 + 1e-12);
}

TEST_CASE("series bound: frozen values for the reference run") {
  // A = 3, M0 = 1.5, R = 0.1, M = 18 (so k0 = 4), derived by hand:
  //   S1 = A R^2 M * kappa/(1-kappa) = 3 * 0.01 * 18 * 17        = 9.18
  //   S2_exact = A^4 R^2 M0          = 81 * 0.01 * 1.5           = 1.215
  //   final    = A^4 R^2 M           = 81 * 0.01 * 18            = 14.58
  //   fitted_C = (2 A^2 - 1)/A^3 + M0/M = 17/27 + 1/12           = 0.71296...
  const DividingConfig cfg = make_cfg(3, 1.5, 0.1, 8);
  const SeriesBound sb = series_bound(cfg, 18.0);
  CHECK(sb.k0 == 4);
  CHECK(sb.S1 == doctest::Approx(9.18).epsilon(1e-12));
  CHECK(sb.S2_exact == doctest::Approx(1.215).epsilon(1e-12));
  CHECK(sb.total == doctest::Approx(10.395).epsilon(1e-12));
  CHECK(sb.final_bound == doctest::Approx(14.58).epsilon(1e-12));
  CHECK(sb.fitted_C ==
        doctest::Approx(17.0 / 27.0 + 1.0 / 12.0).epsilon(1e-12));
  CHECK(sb.chain_ok);
  CHECK(sb.S2_exact <= sb.S2_kappa + 1e-15);
  CHECK(sb.total <= sb.final_bound);
}

TEST_CASE("series bound: exact tail never exceeds the kappa tail") {
  for (int A : {3, 5, 7, 9}) {
    for (double ratio : {2.0, 6.0, 12.0, 40.0}) {
      const DividingConfig cfg = make_cfg(A, 1.5, 0.1, 8);
      const SeriesBound sb = series_bound(cfg, 1.5 * ratio);
      CHECK(sb.chain_ok);
      CHECK(sb.S2_exact <= sb.S2_kappa * (1.0 + 1e-12));
      CHECK(sb.fitted_C < 2.0);
    }
  }
}

TEST_CASE("halving run: frozen recursion totals") {
  // Halving oracle, A = 3, M = 18: every cube halves, terminals all sit at
  // generation k0 = 4; the recursion charge collapses to
  //   A^{k0+1} M0 R^2 = 3^5 * 1.5 * 0.01 = 3.645.
  const DividingConfig cfg = make_cfg(3, 1.5, 0.1, 8);
  const CubeTree tree = run_dividing(halving_oracle(18.0), cfg);
  CHECK(tree.M_root == doctest::Approx(18.0));
  CHECK(tree.k0 == 4);
  CHECK(tree.accounting.complete);
  CHECK(tree.accounting.recursion_total ==
        doctest::Approx(3.645).epsilon(1e-9));
  CHECK(tree.accounting.closed_form_total ==
        doctest::Approx(10.395).epsilon(1e-12));
  CHECK(tree.accounting.recursion_le_series);
  // generation table counts with t-multiplicity: 27^g cubes at generation g
  // (9^g collapsed spatial nodes, each carrying t_mult 3^g)
  REQUIRE(tree.accounting.rows.size() >= 5);
  CHECK(tree.accounting.rows[0].processed == 1);
  CHECK(tree.accounting.rows[1].processed == 27);
  CHECK(tree.accounting.rows[4].processed == 531441);
  CHECK(tree.accounting.rows[4].terminal_small +
            tree.accounting.rows[4].terminal_boundary ==
        531441);
  CHECK(tree.accounting.rows[4].descended == 0);
}

TEST_CASE("halving run: node bookkeeping and t-multiplicities") {
  const DividingConfig cfg = make_cfg(3, 1.5, 0.1, 2);
  const CubeTree tree = run_dividing(halving_oracle(3.0), cfg);
  // gen-1 children all have M = 1.5 <= M0: all terminal, t_mult = 3
  std::uint64_t tsum = 0;
  int gen1 = 0, boundary = 0;
  for (const CubeNode& nd : tree.nodes) {
    if (nd.gen != 1) continue;
    ++gen1;
    tsum += nd.t_mult;
    CHECK(nd.layer >= 1);
    CHECK(nd.layer <= 3);
    if (nd.cls == CubeClass::TerminalBoundary) ++boundary;
  }
  CHECK(gen1 == 9);
  CHECK(tsum == 27);     // 9 collapsed nodes x 3 t-slices
  CHECK(boundary == 3);  // the iy = 0 row touches the flattened boundary
}

TEST_CASE("stuck oracle: reported incomplete, not silently bounded") {
  const DividingConfig cfg = make_cfg(3, 1.5, 0.1, 4);
  const CubeTree tree = run_dividing(stuck_oracle(18.0), cfg);
  CHECK(!tree.accounting.complete);
  CHECK(!tree.accounting.recursion_le_series);
  bool saw_unresolved = false;
  for (const GenerationRow& row : tree.accounting.rows)
    if (row.unresolved > 0) saw_unresolved = true;
  CHECK(saw_unresolved);
}

TEST_CASE("dividing lemma check: halving passes, stuck fails") {
  const DividingConfig cfg = make_cfg(3, 1.5, 0.1, 4);
  ChartCube root;
  root.lo = cfg.origin;
  root.hi = {cfg.origin.x + cfg.R, cfg.origin.y + cfg.R, cfg.origin.t + cfg.R};
  const DividingLemmaReport ok =
      check_dividing_lemma(halving_oracle(18.0), root, cfg);
  CHECK(ok.pass);
  REQUIRE(ok.layers.size() == 3);
  for (const LayerRow& lr : ok.layers) CHECK(lr.pass);
  const DividingLemmaReport bad =
      check_dividing_lemma(stuck_oracle(18.0), root, cfg);
  CHECK(!bad.pass);
  // below-threshold root is not an instance of the lemma at all
  CHECK_THROWS_AS(check_dividing_lemma(halving_oracle(1.0), root, cfg),
                  std::runtime_error);
}

TEST_CASE("interior layers are charged, not subdivided, at large A") {
  // With A = 31 only the 30 layers nearest the boundary descend; the top
  // row (layer 1) is charged as interior at its own generation.
  const DividingConfig cfg = make_cfg(31, 1.5, 0.2, 1);
  const CubeTree tree = run_dividing(halving_oracle(2.5), cfg);  // k0 = 1
  int charged = 0, terminal = 0;
  for (const CubeNode& nd : tree.nodes) {
    if (nd.gen != 1) continue;
    if (nd.cls == CubeClass::ChargedInterior) {
      ++charged;
      CHECK(nd.layer == 1);
    } else {
      ++terminal;
    }
  }
  CHECK(charged == 31);  // one full row of the 31 x 31 grid
  CHECK(charged + terminal == 31 * 31);
  // accounting row carries t-multiplicity: 31 nodes x t_mult 31
  CHECK(tree.accounting.rows[1].charged_interior == 31 * 31);
  CHECK(tree.accounting.complete);
}

TEST_CASE("covering counts: collar charts cover and stay linear in 1/R") {
  const CoveringReport disk = collar_covering_count(DomainSpec::unit_disk(),
                                                    0.05);
  CHECK(disk.covered);
  CHECK(disk.count >= 100);  // ~ perimeter / (beta R) = 157
  CHECK(disk.count <= 400);
  CHECK(disk.fitted_C == doctest::Approx(disk.count * 0.05).epsilon(1e-12));
  const CoveringReport rect =
      collar_covering_count(DomainSpec::rectangle(1.0, 1.0), 0.04);
  CHECK(rect.covered);
  CHECK(rect.count >= 80);
  CHECK(rect.count <= 600);
}

}  // TEST_SUITE
