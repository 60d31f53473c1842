#include <doctest.h>

#include "grushin/perimeter.hpp"
#include "grushin/quadrature.hpp"
#include "support.hpp"

#include <map>
#include <set>

using namespace grushin;
using test::plane;
using test::pt;

namespace {

struct Fixture {
  Grid grid;
  GrushinOperator op;
  SpectralData spec;
  explicit Fixture(const GridSpec& s) : grid(s), op(assemble(grid)), spec(eigendecompose(op)) {}
};

Fixture& gp(int points) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, Fixture(plane(points))).first;
  return it->second;
}

SetMask unit_box(const Grid& g, double a = 0.5) { return rasterize(box_set(pt(0, 0), pt(a, a)), g); }

SetMask empty(const Grid& g) { return mask_from_indicator(g, Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(g.size(), false)); }

}  // namespace

TEST_SUITE("perimeter") {

TEST_CASE("empty set has zero perimeter") {
  Fixture& f = gp(24);
  const QuadratureSpec q;
  const SetMask e = empty(f.grid);
  CHECK(e.measure == 0.0);
  CHECK(perimeter_star(f.spec, e, 0.25, q) == 0.0);
  CHECK(perimeter_infty(f.spec, e, 0.25, log_grid(1e-3, 1.0, 4)) == 0.0);
  const LimitScan s = small_s_limit_scan(f.spec, e, {0.2, 0.1}, q);
  CHECK(s.target == 0.0);
  CHECK(s.extrapolated == 0.0);
  const BracketReport b = half_limit_bracket(f.spec, e, {0.4, 0.45}, q, 0.01);
  CHECK(b.extrapolated == 0.0);
  CHECK(b.lower == 0.0);
  CHECK(b.upper == 0.0);
}

TEST_CASE("perimeter energy is twice the heat-content loss") {
  Fixture& f = gp(32);
  const SetMask box = unit_box(f.grid);
  const EnergySpectrum es = perimeter_energy(f.spec, box);
  const Eigen::VectorXd ind = box.indicator();
  for (double t : {0.01, 0.1}) {
    const double direct = compensated_l1_norm(f.grid, f.spec.apply(ind, [t](double l) { return std::exp(-t * l); }) - ind);
    CHECK(es.energy(t) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("integral and Balakrishnan forms agree") {
  Fixture& f = gp(32);
  const SetMask box = unit_box(f.grid);
  const QuadratureSpec q;
  for (double s : {0.1, 0.25, 0.4}) {
    const PerimeterResult r = perimeter(f.op, f.spec, box, s, q);
    CHECK(r.measure == doctest::Approx(box.measure));
    CHECK(s / std::tgamma(1 - s) * r.p_star == doctest::Approx(r.p_ls).epsilon(1e-8));
    CHECK(r.p_inf > 0.0);
    CHECK(r.p_star == doctest::Approx(perimeter_star(f.spec, box, s, q)).epsilon(1e-12));
  }
}

TEST_CASE("perimeter scales like lambda^(Q-2s) on paired grids") {
  const QuadratureSpec q;
  const SetSpec box = box_set(pt(0, 0), pt(0.4, 0.3));
  const double s = 0.25;
  std::vector<double> lam{1.0, 1.5, 2.0}, val;
  for (double l : lam) {
    const Fixture f(Grid(plane(32)).dilated(l).spec());
    val.push_back(perimeter_star(f.spec, rasterize(dilate_set(l, box), f.grid), s, q));
  }
  CHECK(loglog_fit(lam, val).slope == doctest::Approx(3.0 - 2 * s).epsilon(0.03));
}

TEST_CASE("mollified perimeter") {
  Fixture& f = gp(32);
  const SetMask box = unit_box(f.grid);
  const QuadratureSpec q;
  const double s = 0.25;
  const MollificationReport m = perimeter_via_mollification(f.spec, box, s, {0.05, 0.02, 0.01, 0.005});
  for (size_t i = 0; i < m.value.size(); ++i) {
    CHECK(m.value[i] <= m.unmollified * (1 + 1e-8));
    if (i) CHECK(m.value[i] >= m.value[i - 1] * (1 - 1e-12));
  }
  CHECK(m.estimate == m.value.back());
  CHECK(m.estimate <= s / std::tgamma(1 - s) * perimeter_star(f.spec, box, s, q) * (1 + 1e-8));
}

TEST_CASE("coarea formula") {
  Fixture& f = gp(32);
  const QuadratureSpec q;
  const SetMask box = unit_box(f.grid);
  const CoareaReport ind = coarea_defect(f.spec, box.indicator(), 0.25, q);
  CHECK(ind.levels == 1);
  CHECK(ind.defect == 0.0);
  Eigen::VectorXd st = Eigen::VectorXd::Zero(f.grid.size());
  for (double a : {0.9, 0.6, 0.3}) st += unit_box(f.grid, a).indicator();
  const CoareaReport sr = coarea_defect(f.spec, st, 0.25, q);
  CHECK(sr.levels == 3);
  CHECK(sr.defect < 1e-10);
  // binning error shrinks with resolution; 64^2 distinct values into 64 levels
  Fixture& fine = gp(64);
  const CoareaReport br = coarea_defect_binned(fine.spec, test::bump(fine.grid, 0, 0, 0.4), 0.25, q, 64);
  CHECK(br.levels <= 64);
  CHECK(br.defect < 0.01);
}

TEST_CASE("binning keeps at most the requested number of levels") {
  const Grid g(plane(24));
  const Eigen::VectorXd b = bin_levels(test::bump(g, 0, 0, 0.5), 10);
  std::set<double> distinct(b.data(), b.data() + b.size());
  CHECK(distinct.size() <= 11);  // ten levels plus zero
  CHECK(b.minCoeff() >= 0.0);
}

TEST_CASE("s -> 0 and s -> 1/2 limits on a box") {
  Fixture& f = gp(48);
  const SetMask box = unit_box(f.grid);
  QuadratureSpec q;
  const LimitScan s = small_s_limit_scan(f.spec, box, {0.2, 0.1, 0.05}, q);
  CHECK(s.target == doctest::Approx(2.0 * box.measure));
  CHECK(s.extrapolated == doctest::Approx(s.target).epsilon(0.10));
  QuadratureSpec wide = q;
  wide.t_max *= 2;
  CHECK(small_s_limit_scan(f.spec, box, {0.2, 0.1, 0.05}, wide).extrapolated ==
        doctest::Approx(s.extrapolated).epsilon(0.02));
  const BracketReport b = half_limit_bracket(f.spec, box, {0.4, 0.425, 0.45, 0.475}, q, 0.01);
  CHECK(b.holds(0.10));
}

TEST_CASE("isoperimetric scan and the Sobolev route") {
  Fixture& f = gp(32);
  const QuadratureSpec q;
  const double s = 0.25;
  const std::vector<LabelledSet> fam{{"a", box_set(pt(0, 0), pt(0.5, 0.5))},
                                     {"b", box_set(pt(0, 0), pt(0.8, 0.3))},
                                     {"c", box_set(pt(0, 0), pt(0.3, 0.2))}};
  const IsoperimetricScan sc = isoperimetric_scan(f.spec, fam, s, q);
  REQUIRE(sc.rows.size() == 3);
  for (const auto& r : sc.rows) {
    CHECK(r.ratio_star > 0.0);
    CHECK(r.ratio_inf > 0.0);
    CHECK(r.ratio_moll > 0.0);
    CHECK(r.ratio_star == doctest::Approx(r.p_star / std::pow(r.measure, (3.0 - 2 * s) / 3.0)));
    CHECK(r.ratio_star >= sc.min_star);
  }
  // staircase whose level sets are family members
  const Eigen::VectorXd u = rasterize(fam[0].set, f.grid).indicator() + rasterize(fam[2].set, f.grid).indicator();
  CHECK(sobolev_route_ratio(f.spec, u, s, q, sc.min_star) <= 1.0 + 1e-12);
}

}
