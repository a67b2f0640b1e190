#include "instances.hpp"

#include "mplectic/syntax.hpp"

#include <doctest.h>

using namespace mplectic;

namespace {

const char* kExample4 = "dx123 - dx156 - dx246 - dx345";
const char* kExample5 = "dx145 + dx246 + dx356 + dx456";
// the G2 three-form: nondegenerate on R^7, and 7 is not c + C(c, 2)
const char* kG2 = "dx123 + dx145 + dx167 + dx246 - dx257 - dx347 - dx356";

SubspaceQ coords(int n, std::vector<int> one_based) {
  for (int& i : one_based) --i;
  return SubspaceQ::coordinate(n, one_based);
}

template <class T>
StandardStructure<T> passed(const StandardCheck<T>& check) {
  REQUIRE(std::holds_alternative<StandardStructure<T>>(check));
  return std::get<StandardStructure<T>>(check);
}

}  // namespace

TEST_CASE("verify_standard examples") {
  const auto can = passed(verify_standard(canonical_form<Rational>(3, 2), fiber_summand<Rational>(3, 2)));
  CHECK(can.c == 3);
  CHECK(can.d == 3);
  CHECK(can.k == 2);
  CHECK(can.chi_matrix == MatrixQ::Identity(3, 3));

  const AltFormQ ex5 = parse_form(kExample5, 6);
  const auto s5 = passed(verify_standard(ex5, coords(6, {1, 2, 3})));
  // chi: column j = iota_{e_j} omega on the lexicographic pairs (45, 46, 56)
  for (int j = 0; j < 3; ++j) {
    const AltFormQ iota = contract(unit_vector<Rational>(6, j), ex5);
    int r = 0;
    for (const auto& pair : combinations(3, 2)) {
      CHECK(s5.chi_matrix(r, j) == iota.coeff(MultiIndex({pair[0] + 3, pair[1] + 3})));
      ++r;
    }
  }

  const auto bad = verify_standard(ex5, coords(6, {4, 5, 6}));
  REQUIRE(std::holds_alternative<StandardViolation<Rational>>(bad));
  const auto& v = std::get<StandardViolation<Rational>>(bad);
  CHECK(v.condition == StandardCondition::PairwiseNull);
  REQUIRE(v.witness.size() == 2);
  CHECK_FALSE(multi_contract(v.witness, ex5).is_zero());

  const auto dim = verify_standard(ex5, coords(6, {1, 2}));
  REQUIRE(std::holds_alternative<StandardViolation<Rational>>(dim));
  CHECK(std::get<StandardViolation<Rational>>(dim).condition == StandardCondition::Dimension);

  // volume form on R^3 with W = span(e_1): pairwise null, d = 1 = C(2, 2), but c = k
  const auto codim = verify_standard(parse_form("dx123", 3), coords(3, {1}));
  REQUIRE(std::holds_alternative<StandardViolation<Rational>>(codim));
  CHECK(std::get<StandardViolation<Rational>>(codim).condition == StandardCondition::Codimension);

  CHECK_THROWS_AS(verify_standard(parse_form("dx12 + dx34", 4), coords(4, {1, 2})), PreconditionError);
  CHECK_THROWS_AS(verify_standard(parse_form("dx123", 4), coords(4, {1})), PreconditionError);
}

TEST_CASE("solve_codim") {
  CHECK(solve_codim(6, 2) == 3);
  CHECK(solve_codim(10, 2) == 4);
  CHECK_FALSE(solve_codim(7, 2).has_value());
  CHECK(solve_codim(8, 3) == 4);
  for (int k = 2; k <= 5; ++k)
    for (int n = 2; n <= 40; ++n) {
      std::optional<int> expected;
      for (int c = k + 1; c <= n; ++c)
        if (c + static_cast<int>(binomial(c, k)) == n) expected = c;
      CHECK(solve_codim(n, k) == expected);
    }
}

TEST_CASE("rank_test_vector examples") {
  const AltFormQ ex5 = parse_form(kExample5, 6);
  CHECK(rank_test_vector(ex5, 3, unit_vector<Rational>(6, 0)));
  CHECK_FALSE(rank_test_vector(ex5, 3, unit_vector<Rational>(6, 3)));
  CHECK(instances::contraction_rank(oracle::from_alt(ex5), unit_vector<Rational>(6, 0)) == 2);
  CHECK(instances::contraction_rank(oracle::from_alt(ex5), unit_vector<Rational>(6, 3)) == 4);
  const AltFormQ can = canonical_form<Rational>(3, 2);
  for (int i = 3; i < 6; ++i) CHECK(rank_test_vector(can, 3, unit_vector<Rational>(6, i)));
  CHECK_THROWS_AS(rank_test_vector(ex5, 3, VectorQ(VectorQ::Zero(6))), PreconditionError);
}

TEST_CASE("rank test is sound on transported canonical models") {
  std::mt19937 rng(101);
  for (const auto [c, k] : {std::pair{3, 2}, std::pair{4, 2}, std::pair{4, 3}}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto inst = instances::transported(rng, c, k);
      const oracle::Form f = oracle::from_alt(inst.omega);
      for (const auto& w : inst.w_images) CHECK(rank_test_vector(inst.omega, c, w));
      for (int s = 0; s < 40; ++s) {
        const VectorQ v = oracle::random_vector(rng, inst.omega.dim());
        if (v.isZero()) continue;
        const bool in_w = inst.W.contains(v);
        const bool oracle_verdict = instances::contraction_rank(f, v) <= c;
        CHECK(rank_test_vector(inst.omega, c, v) == in_w);
        CHECK(oracle_verdict == in_w);
      }
    }
  }
}

TEST_CASE("find_w examples") {
  const auto ex5 = find_w(parse_form(kExample5, 6));
  REQUIRE(std::holds_alternative<WFound<Rational>>(ex5));
  CHECK(std::get<WFound<Rational>>(ex5).structure.W == coords(6, {1, 2, 3}));

  const auto can = find_w(canonical_form<Rational>(3, 2));
  REQUIRE(std::holds_alternative<WFound<Rational>>(can));
  CHECK(std::get<WFound<Rational>>(can).structure.W == fiber_summand<Rational>(3, 2));

  const AltFormQ ex4 = parse_form(kExample4, 6);
  CHECK(std::holds_alternative<WNotFound>(find_w(ex4)));
  // pool vectors passing the rank test are exactly those with contraction rank <= 3 by brute force
  const oracle::Form f4 = oracle::from_alt(ex4);
  int accepted = 0;
  for (const auto& v : small_integer_vectors<Rational>(6, 1, 3)) {
    const bool expected = instances::contraction_rank(f4, v) <= 3;
    CHECK(rank_test_vector(ex4, 3, v) == expected);
    accepted += expected;
  }
  CHECK(accepted == 6);  // e_i +- e_{i+3}

  const AltFormQ g2 = parse_form(kG2, 7);
  REQUIRE(is_nondegenerate(g2));
  const auto by_dim = find_w(g2);
  REQUIRE(std::holds_alternative<WNotStandardByDimension>(by_dim));
  CHECK(std::get<WNotStandardByDimension>(by_dim).n == 7);

  const auto ex5_float = find_w(parse_form(kExample5, 6).cast<double>());
  REQUIRE(std::holds_alternative<WFound<double>>(ex5_float));
  CHECK(std::get<WFound<double>>(ex5_float).structure.W == SubspaceD::coordinate(6, {0, 1, 2}));
}

TEST_CASE("small-integer pool") {
  const auto pool = small_integer_vectors<Rational>(3, 1, 2);
  // support 1: 3 vectors; support 2: 3 pairs times 2 signs of the second entry
  CHECK(pool.size() == 9);
  for (const auto& v : pool) {
    CHECK_FALSE(v.isZero());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v(i).is_zero()) continue;
      CHECK(v(i) == 1);  // leading entry is positive
      break;
    }
  }
  CHECK(small_integer_vectors<Rational>(4, 2, 1).size() == 8);
}

TEST_CASE("find_w result does not depend on pool order or hints") {
  std::mt19937 rng(103);
  for (const auto [c, k] : {std::pair{3, 2}, std::pair{4, 2}}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto inst = instances::transported(rng, c, k);
      FindWOptions<Rational> hinted;
      hinted.hint_vectors = inst.w_images;
      const auto base = find_w(inst.omega, hinted);
      REQUIRE(std::holds_alternative<WFound<Rational>>(base));
      const SubspaceQ W = std::get<WFound<Rational>>(base).structure.W;
      CHECK(W == inst.W);
      for (unsigned seed = 1; seed <= 3; ++seed) {
        FindWOptions<Rational> shuffled = hinted;
        std::shuffle(shuffled.hint_vectors.begin(), shuffled.hint_vectors.end(), rng);
        shuffled.shuffle_seed = seed;
        const auto again = find_w(inst.omega, shuffled);
        REQUIRE(std::holds_alternative<WFound<Rational>>(again));
        CHECK(std::get<WFound<Rational>>(again).structure.W == W);
      }
      FindWOptions<Rational> as_subspace;
      as_subspace.hint_subspaces = {inst.W};
      const auto sub = find_w(inst.omega, as_subspace);
      REQUIRE(std::holds_alternative<WFound<Rational>>(sub));
      CHECK(std::get<WFound<Rational>>(sub).structure.W == W);
    }
  }
  // Example 5 without hints under several pool orders
  const AltFormQ ex5 = parse_form(kExample5, 6);
  for (unsigned seed = 1; seed <= 5; ++seed) {
    FindWOptions<Rational> o;
    o.shuffle_seed = seed;
    const auto r = find_w(ex5, o);
    REQUIRE(std::holds_alternative<WFound<Rational>>(r));
    CHECK(std::get<WFound<Rational>>(r).structure.W == coords(6, {1, 2, 3}));
  }
}

TEST_CASE("verified structures satisfy d >= c and d >= 2") {
  std::mt19937 rng(107);
  for (const auto [c, k] : {std::pair{3, 2}, std::pair{4, 2}, std::pair{4, 3}, std::pair{5, 2}, std::pair{5, 4}}) {
    const auto inst = instances::transported(rng, c, k);
    const auto s = passed(verify_standard(inst.omega, inst.W));
    CHECK(s.c == c);
    CHECK(s.d >= s.c);
    CHECK(s.d >= 2);
    CHECK(rank<Rational>(s.chi_matrix) == s.d);
  }
}

TEST_CASE("lagrangian_complement") {
  const AltFormQ can = canonical_form<Rational>(3, 2);
  const auto s = passed(verify_standard(can, fiber_summand<Rational>(3, 2)));
  CHECK(lagrangian_complement(s, base_summand<Rational>(3, 2)) == base_summand<Rational>(3, 2));

  std::mt19937 rng(109);
  const oracle::Form fc = oracle::from_alt(can);
  for (int trial = 0; trial < 10; ++trial) {
    // graph of B: base -> fiber
    const MatrixQ b = oracle::random_matrix(rng, 3, 3);
    MatrixQ rows(3, 6);
    rows << MatrixQ::Identity(3, 3), b;
    const SubspaceQ ltilde = SubspaceQ::span(rows);
    const SubspaceQ l = lagrangian_complement(s, ltilde);
    CHECK(is_lagrangian(can, l, 2));
    CHECK(are_complementary(s.W, l));
    CHECK(instances::vanishes_on(fc, l));
  }

  const AltFormQ ex5 = parse_form(kExample5, 6);
  const auto s5 = passed(verify_standard(ex5, coords(6, {1, 2, 3})));
  const SubspaceQ l5 = lagrangian_complement(s5, coords(6, {4, 5, 6}));
  CHECK(is_lagrangian(ex5, l5, 2));
  CHECK(are_complementary(s5.W, l5));
  CHECK(instances::vanishes_on(oracle::from_alt(ex5), l5));
  CHECK_FALSE(instances::vanishes_on(oracle::from_alt(ex5), coords(6, {4, 5, 6})));

  CHECK_THROWS_AS(lagrangian_complement(s5, coords(6, {1, 5, 6})), PreconditionError);
}

TEST_CASE("canonical_form") {
  const AltFormQ can = canonical_form<Rational>(3, 2);
  CHECK(can.dim() == 6);
  CHECK(can.degree() == 3);
  // omega_can(e_{p12}, e_{q1}, e_{q2}) = dq^{12}(e_{q1}, e_{q2})
  const std::vector<VectorQ> args{unit_vector<Rational>(6, 3), unit_vector<Rational>(6, 0), unit_vector<Rational>(6, 1)};
  CHECK(can.evaluate(args) == 1);
  CHECK(is_nondegenerate(can));
  CHECK(can == parse_form("dx124 + dx135 + dx236", 6));
  // sum_I dp_I ^ dq^I in general: check the (4, 3) model term by term
  const AltFormQ can43 = canonical_form<Rational>(4, 3);
  int r = 4;
  for (const MultiIndex& I : combinations(4, 3)) {
    std::vector<int> idx(I.begin(), I.end());
    idx.insert(idx.begin(), r);
    std::vector<int> sorted = idx;
    const int sign = sort_with_sign(sorted);
    CHECK(can43.coeff(MultiIndex(sorted)) == sign);
    ++r;
  }
  CHECK_THROWS_AS(canonical_form<Rational>(2, 2), PreconditionError);
  CHECK_THROWS_AS(canonical_form<Rational>(3, 1), PreconditionError);
}

TEST_CASE("gamma") {
  const AltFormQ can = canonical_form<Rational>(3, 2);
  const auto s = passed(verify_standard(can, fiber_summand<Rational>(3, 2)));
  CHECK(gamma(s, base_summand<Rational>(3, 2)) == MatrixQ::Identity(6, 6));

  // Example 5 is linearly symplectomorphic to the canonical model
  const AltFormQ ex5 = parse_form(kExample5, 6);
  const auto s5 = passed(verify_standard(ex5, coords(6, {1, 2, 3})));
  const SubspaceQ l5 = lagrangian_complement(s5, coords(6, {4, 5, 6}));
  const MatrixQ g5 = gamma(s5, l5);
  CHECK(pullback_linear(g5, can) == ex5);
  CHECK(inverse<Rational>(g5).has_value());
  CHECK_THROWS_AS(gamma(s5, coords(6, {4, 5, 6})), PreconditionError);  // complementary but not Lagrangian

  std::mt19937 rng(113);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = instances::transported(rng, 3, 2);
    const auto st = passed(verify_standard(inst.omega, inst.W));
    const SubspaceQ l = lagrangian_complement(st, instances::random_complement(rng, st.W));
    CHECK(pullback_linear(gamma(st, l), can) == inst.omega);
  }
}

TEST_CASE("pullback_linear examples") {
  std::mt19937 rng(127);
  const AltFormQ a = oracle::random_form(rng, 5, 3);
  CHECK(pullback_linear(MatrixQ(MatrixQ::Identity(5, 5)), a) == a);
  CHECK(pullback_linear(MatrixQ(2 * MatrixQ::Identity(5, 5)), a) == Rational(8) * a);
  MatrixQ swap = MatrixQ::Zero(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(pullback_linear(swap, parse_form("dx12", 2)) == parse_form("-dx12", 2));
  CHECK_THROWS_AS(pullback_linear(MatrixQ(MatrixQ::Identity(4, 4)), a), DimensionMismatch);
}

TEST_CASE("graph of a linear map is Lagrangian iff the map preserves the form") {
  const AltFormQ can = canonical_form<Rational>(3, 2);
  CHECK(graph_is_lagrangian(can, MatrixQ(MatrixQ::Identity(6, 6))));
  const MatrixQ twice = 2 * MatrixQ::Identity(6, 6);
  CHECK_FALSE(graph_is_lagrangian(can, twice));
  CHECK(pullback_linear(twice, can) == Rational(8) * can);

  std::mt19937 rng(131);
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixQ sym = instances::canonical_symmetry(oracle::random_invertible(rng, 3, 2), 2);
    CHECK(pullback_linear(sym, can) == can);
    CHECK(graph_is_lagrangian(can, sym));
  }
  for (int trial = 0; trial < 20; ++trial) {
    // the claim needs eta k-plectic: a degenerate eta has an isotropic diagonal that is not maximal
    const std::pair<int, int> shapes[] = {{2, 2}, {4, 2}, {3, 3}, {4, 4}, {6, 3}};
    const auto [n, p] = shapes[trial % 5];
    AltFormQ eta = oracle::random_form(rng, n, p, 2);
    while (!is_nondegenerate(eta)) eta = oracle::random_form(rng, n, eta.degree(), 2);
    // mix symmetries and random maps
    const MatrixQ a = trial % 2 ? oracle::random_invertible(rng, n, 1) : MatrixQ(MatrixQ::Identity(n, n));
    CHECK(graph_is_lagrangian(eta, a) == (pullback_linear(a, eta) == eta));
  }
  CHECK_THROWS_AS(graph_is_lagrangian(can, MatrixQ(MatrixQ::Zero(6, 6))), PreconditionError);
}

TEST_CASE("Cartan three-form") {
  const auto so3 = so3_structure_constants<Rational>();
  const AltFormQ w = cartan_form(so3, 3);
  CHECK(w == parse_form("-2 dx123", 3));
  // Killing form by direct trace of ad matrices
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      MatrixQ ad_a(3, 3), ad_b(3, 3);
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
          ad_a(y, x) = so3[static_cast<std::size_t>((a * 3 + x) * 3 + y)];
          ad_b(y, x) = so3[static_cast<std::size_t>((b * 3 + x) * 3 + y)];
        }
      CHECK((ad_a * ad_b).trace() == (a == b ? -2 : 0));
    }
  CHECK(is_nondegenerate(w));
  CHECK(is_lagrangian(w, coords(3, {3}), 1));
  CHECK(cartan_form(std::vector<Rational>(27, Rational(0)), 3).is_zero());
  auto broken = so3;
  broken[static_cast<std::size_t>((0 * 3 + 1) * 3 + 2)] = 2;
  CHECK_THROWS_AS(cartan_form(broken, 3), PreconditionError);
  // antisymmetric but violating Jacobi: [e1,e2] = e1, [e2,e3] = e2, [e1,e3] = e3
  std::vector<Rational> nonjacobi(27, Rational(0));
  auto set = [&](int i, int j, int l, int v) {
    nonjacobi[static_cast<std::size_t>((i * 3 + j) * 3 + l)] = v;
    nonjacobi[static_cast<std::size_t>((j * 3 + i) * 3 + l)] = -v;
  };
  set(0, 1, 0, 1);
  set(1, 2, 1, 1);
  set(0, 2, 2, 1);
  CHECK_THROWS_AS(cartan_form(nonjacobi, 3), PreconditionError);
}
