#include <catch_amalgamated.hpp>

#include <cstdint>
#include <random>

#include "support.hpp"

using namespace vbsmpe;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testing_support::config_of;
using testing_support::table1_model;

namespace {

const MassUniverse& universe(const Model& m, std::size_t number) { return m.masses()[number - 1]; }

FocalSet labels_to_set(const Model& model, const MassUniverse& u, std::vector<std::vector<std::string>> rows) {
  std::vector<Tuple> tuples;
  for (const auto& row : rows) {
    Tuple t;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const auto& frame = model.variable(u.vars[k]).frame;
      t.push_back(static_cast<Ordinal>(std::find(frame.begin(), frame.end(), row[k]) - frame.begin()));
    }
    tuples.push_back(t);
  }
  return FocalSet::make(u.vars, tuples);
}

MassUniverse binary_mass(std::vector<std::pair<std::vector<Tuple>, double>> focal) {
  MassUniverse m{{0}, {2}, {}};
  for (auto& [tuples, mass] : focal) m.focal.push_back({FocalSet::make({0}, tuples), mass});
  return m;
}

/// Random mass universes over at most 12 tuples.
std::vector<MassUniverse> small_corpus(std::uint64_t seed, std::size_t count) {
  std::vector<MassUniverse> out;
  for (std::uint64_t s = 0; out.size() < count; ++s) {
    GenOptions opt;
    opt.kind = ModelKind::dst;
    opt.n_vars = 3;
    opt.max_frame = 3;
    opt.max_universe_vars = 2;
    opt.max_focal = 5;
    opt.discount = (s % 2) == 0;
    opt.seed = seed * 1000 + s;
    const auto model = generate_model(opt);
    for (const auto& u : model.masses()) {
      if (table_size(u.radices) <= 12) out.push_back(u);
    }
  }
  out.resize(count);
  return out;
}

std::uint32_t mask_of(const FocalSet& f, const std::vector<std::size_t>& radices) {
  std::uint32_t mask = 0;
  for (const auto& t : f.tuples) mask |= 1u << tuple_index(t, radices);
  return mask;
}

FocalSet set_of(std::uint32_t mask, const MassUniverse& m) {
  FocalSet f{m.vars, {}};
  for (std::size_t i = 0; i < table_size(m.radices); ++i) {
    if (mask & (1u << i)) f.tuples.push_back(tuple_at(i, m.radices));
  }
  return f;
}

}  // namespace

TEST_CASE("singleton commonality reproduces reference entries", "[dst][commonality]") {
  const auto model = table1_model();
  const auto q1 = singleton_commonality(universe(model, 1));
  // (b1, a1): 0.20 + 0.45 + 0.25
  REQUIRE_THAT(q1.q[tuple_index({0, 0}, q1.radices)], WithinAbs(0.90, 1e-12));
  const auto q4 = singleton_commonality(universe(model, 4));
  // (f2, b2): 0.32 + 0.15 + 0.35
  REQUIRE_THAT(q4.q[tuple_index({1, 1}, q4.radices)], WithinAbs(0.82, 1e-12));
}

TEST_CASE("vacuous belief has commonality one everywhere", "[dst][commonality]") {
  const auto q = singleton_commonality(vacuous({0, 1}, {3, 2}));
  REQUIRE(q.q.size() == 6);
  for (double v : q.q) REQUIRE(v == 1.0);
}

TEST_CASE("belief", "[dst][belief]") {
  const auto model = table1_model();
  const auto& m1 = universe(model, 1);
  const auto& m2 = universe(model, 2);
  REQUIRE_THAT(belief(m1, full_frame(m1.vars, m1.radices)), WithinAbs(1.0, 1e-12));
  // {a1}, {a2}, {a1,a2} lie inside {a1,a2}: 0.40 + 0.05 + 0.35
  REQUIRE_THAT(belief(m2, labels_to_set(model, m2, {{"a1"}, {"a2"}})), WithinAbs(0.80, 1e-12));
  // no focal set of m_1 sits inside {(b2,a2)}
  REQUIRE(belief(m1, labels_to_set(model, m1, {{"b2", "a2"}})) == 0.0);
}

TEST_CASE("plausibility", "[dst][plausibility]") {
  const auto model = table1_model();
  const auto& m2 = universe(model, 2);
  REQUIRE_THAT(plausibility(m2, full_frame(m2.vars, m2.radices)), WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(plausibility(m2, labels_to_set(model, m2, {{"a2"}})), WithinAbs(0.40, 1e-12));
}

TEST_CASE("singleton plausibility equals singleton commonality exactly", "[dst][property]") {
  auto check = [](const MassUniverse& m) {
    const auto q = singleton_commonality(m);
    for (std::size_t i = 0; i < q.q.size(); ++i) {
      const FocalSet single{m.vars, {tuple_at(i, m.radices)}};
      REQUIRE(plausibility(m, single) == q.q[i]);
    }
  };
  const auto model = table1_model();
  for (const auto& m : model.masses()) check(m);
  for (const auto& m : small_corpus(1, 40)) check(m);
}

TEST_CASE("plausibility and belief are dual on every subset", "[dst][property]") {
  for (const auto& m : small_corpus(2, 25)) {
    const std::size_t n = table_size(m.radices);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      const FocalSet a = set_of(mask, m);
      REQUIRE_THAT(plausibility(m, a), WithinAbs(1.0 - belief(m, complement(a, m.radices)), 1e-12));
    }
  }
}

TEST_CASE("commonality is antimonotone under inclusion", "[dst][property]") {
  for (const auto& m : small_corpus(3, 25)) {
    const std::size_t n = table_size(m.radices);
    // Oracle: Q(A) = sum of m(B) over B containing A, on bitmasks.
    std::vector<std::pair<std::uint32_t, double>> focal;
    for (const auto& f : m.focal) focal.emplace_back(mask_of(f.set, m.radices), f.mass);
    std::vector<double> q(1u << n, 0.0);
    for (std::uint32_t a = 0; a < q.size(); ++a) {
      for (const auto& [b, mass] : focal) {
        if ((b & a) == a) q[a] += mass;
      }
    }
    for (std::uint32_t a = 1; a < q.size(); ++a) {
      REQUIRE_THAT(commonality(m, set_of(a, m)), WithinAbs(q[a], 1e-12));
      for (std::uint32_t b = a; b < q.size(); b = (b + 1) | a) {
        REQUIRE(q[a] >= q[b] - 1e-15);  // a is a subset of b
      }
    }
  }
}

TEST_CASE("combining with the vacuous mass is the identity", "[dst][combine]") {
  const auto model = table1_model();
  for (const auto& m : model.masses()) {
    const auto r = combine(m, vacuous(m.vars, m.radices));
    REQUIRE(r.conflict == 0.0);
    REQUIRE(r.mass.vars == m.vars);
    REQUIRE(r.mass.focal.size() == m.focal.size());
    for (const auto& f : m.focal) {
      auto it = std::find_if(r.mass.focal.begin(), r.mass.focal.end(),
                             [&](const FocalElement& g) { return g.set.tuples == f.set.tuples; });
      REQUIRE(it != r.mass.focal.end());
      REQUIRE_THAT(it->mass, WithinAbs(f.mass, 1e-12));
    }
  }
}

TEST_CASE("combination of two binary masses", "[dst][combine]") {
  // m1({x1}) = 0.6, m1({x1,x2}) = 0.4; m2({x2}) = 0.5, m2({x1,x2}) = 0.5.
  // Pairs: {x1}&{x2} empty 0.30; {x1}&X = {x1} 0.30; X&{x2} = {x2} 0.20; X&X 0.20.
  const auto m1 = binary_mass({{{{0}}, 0.6}, {{{0}, {1}}, 0.4}});
  const auto m2 = binary_mass({{{{1}}, 0.5}, {{{0}, {1}}, 0.5}});
  const auto r = combine(m1, m2);
  REQUIRE_THAT(r.conflict, WithinAbs(0.30, 1e-12));
  REQUIRE(r.mass.focal.size() == 3);
  auto mass_of = [&](std::vector<Tuple> tuples) {
    for (const auto& f : r.mass.focal) {
      if (f.set.tuples == tuples) return f.mass;
    }
    return -1.0;
  };
  REQUIRE_THAT(mass_of({{0}}), WithinAbs(0.30 / 0.70, 1e-12));
  REQUIRE_THAT(mass_of({{1}}), WithinAbs(0.20 / 0.70, 1e-12));
  REQUIRE_THAT(mass_of({{0}, {1}}), WithinAbs(0.20 / 0.70, 1e-12));
  REQUIRE_THAT(r.mass.total_mass(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("fully contradictory masses raise total conflict", "[dst][combine]") {
  const auto m1 = binary_mass({{{{0}}, 1.0}});
  const auto m2 = binary_mass({{{{1}}, 1.0}});
  try {
    combine(m1, m2);
    FAIL("expected total conflict");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::total_conflict);
  }
}

TEST_CASE("combination guard refuses oversized focal sets", "[dst][combine]") {
  const auto a = vacuous({0, 1}, {4, 4});
  const auto b = vacuous({2, 3}, {4, 4});
  try {
    combine(a, b, 100);
    FAIL("expected capacity error");
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::capacity);
  }
}

TEST_CASE("combined commonality factorizes over singletons", "[dst][combine][property]") {
  // Q_{m1+m2}({t}) = Q_1(t|h1) * Q_2(t|h2) / (1 - conflict)
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GenOptions opt;
    opt.kind = ModelKind::dst;
    opt.n_vars = 3;
    opt.max_frame = 3;
    opt.universes = 2;
    opt.max_universe_vars = 2;
    opt.discount = seed % 3 != 0;
    opt.seed = 500 + seed;
    const auto model = generate_model(opt);
    const auto& m1 = model.masses()[0];
    const auto& m2 = model.masses()[1];
    CombineResult r;
    try {
      r = combine(m1, m2);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::total_conflict);
      continue;
    }
    REQUIRE_THAT(r.mass.total_mass(), WithinAbs(1.0, 1e-12));
    const auto joint = singleton_commonality(r.mass);
    const auto q1 = singleton_commonality(m1);
    const auto q2 = singleton_commonality(m2);
    const double k = 1.0 / (1.0 - r.conflict);
    for_each_configuration(allowed_domains(model.variables(), {}), [&](const Configuration& c) {
      REQUIRE_THAT(joint.at(c), WithinAbs(k * q1.at(c) * q2.at(c), 1e-12));
    });
  }
}

TEST_CASE("marginalization onto all variables merges nothing away", "[dst][marginalize]") {
  const auto model = table1_model();
  for (const auto& m : model.masses()) {
    const auto p = marginalize_mass(m, m.vars);
    REQUIRE(p.focal.size() == m.focal.size());
    REQUIRE_THAT(p.total_mass(), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("marginalizing universe 3 onto C", "[dst][marginalize]") {
  const auto model = table1_model();
  const auto& m3 = universe(model, 3);
  const auto c = *model.find_variable("C");
  const auto p = marginalize_mass(m3, {c});
  // projections {c1}:0.10, {c1}:0.10, {c1,c2}:0.70, {c1,c2}:0.10
  REQUIRE(p.focal.size() == 2);
  REQUIRE(p.focal[0].set.tuples == std::vector<Tuple>{{0}});
  REQUIRE_THAT(p.focal[0].mass, WithinAbs(0.20, 1e-12));
  REQUIRE(p.focal[1].set.tuples == std::vector<Tuple>{{0}, {1}});
  REQUIRE_THAT(p.focal[1].mass, WithinAbs(0.80, 1e-12));
}

TEST_CASE("vacuous mass projects to vacuous mass", "[dst][marginalize]") {
  const auto p = marginalize_mass(vacuous({0, 1, 2}, {2, 3, 2}), {2, 0});
  REQUIRE(p.focal.size() == 1);
  REQUIRE(p.focal[0].mass == 1.0);
  REQUIRE(p.focal[0].set.tuples.size() == 4);
  REQUIRE(p.vars == std::vector<VariableId>{2, 0});
}

TEST_CASE("marginalization preserves total mass", "[dst][marginalize][property]") {
  std::mt19937_64 rng(5);
  for (const auto& m : small_corpus(4, 40)) {
    std::vector<VariableId> onto;
    for (auto v : m.vars) {
      if (rng() % 2) onto.push_back(v);
    }
    if (onto.empty()) onto.push_back(m.vars.back());
    REQUIRE_THAT(marginalize_mass(m, onto).total_mass(), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("objective at the reference configuration", "[dst][score]") {
  const auto model = table1_model();
  const double expected = 0.90 * 0.80 * 0.70 * 0.40 * 0.60 * 0.60 * 0.60 * 0.54 * 0.60 * 0.78;
  const double s = dst_score(config_of(model, "a1,b1,c2,d2,e1,f1,g2,h1,i2,j2"), model);
  REQUIRE_THAT(s, WithinAbs(0.01100484, 1e-8));
  REQUIRE_THAT(s, WithinRel(expected, 1e-12));
}

TEST_CASE("objective at a second configuration", "[dst][score]") {
  const auto model = table1_model();
  // Q1(b2,a3) Q2(a3) Q3(c1,b2) Q4(f2,b2) Q5(e2,c1,d1) Q6(i1,f2,j1) Q7(g2,f2) Q8(j1) Q9(d1) Q10(h2,g2)
  const double expected = 0.70 * 0.20 * 0.90 * 0.82 * 0.45 * 0.90 * 0.32 * 0.46 * 0.40 * 0.22;
  REQUIRE_THAT(expected, WithinRel(0.00054203821056, 1e-12));
  REQUIRE_THAT(dst_score(config_of(model, "a3,b2,c1,d1,e2,f2,g2,h2,i1,j1"), model), WithinRel(expected, 1e-12));
}

TEST_CASE("all-vacuous model scores one everywhere", "[dst][score]") {
  std::vector<Variable> vars{{0, "X", {"x1", "x2"}}, {1, "Y", {"y1", "y2", "y3"}}};
  const auto model = Model::dst(vars, {vacuous({0, 1}, {2, 3}), vacuous({1}, {3})});
  for_each_configuration(allowed_domains(model.variables(), {}),
                         [&](const Configuration& c) { REQUIRE(dst_score(c, model) == 1.0); });
}
