#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "auscult/error.hpp"
#include "auscult/numerics/activations.hpp"
#include "auscult/numerics/gradcheck.hpp"
#include "auscult/numerics/matrix.hpp"
#include "auscult/numerics/rng.hpp"
#include "testutil.hpp"

using namespace auscult;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <typename Draw>
Moments sample_moments(int n, Draw draw) {
  std::vector<double> xs(static_cast<size_t>(n));
  for (auto& x : xs) x = draw();
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, var / n};
}

}  // namespace

TEST_CASE("rng: same seed reproduces the draw sequence bitwise") {
  Rng a(42), b(42);
  for (int i = 0; i < 200; ++i) CHECK(a.next_u64() == b.next_u64());

  // Mixed-type draws stay in lockstep too: the sequence is a pure function
  // of the seed, not of which typed wrapper pulled the words.
  Rng c(7), d(7);
  for (int i = 0; i < 50; ++i) {
    CHECK(c.uniform() == d.uniform());
    CHECK(c.normal() == d.normal());
    CHECK(c.gamma(0.4) == d.gamma(0.4));
  }
}

TEST_CASE("rng: child streams are reproducible and mutually distinct") {
  Rng root(123);
  Rng a = root.child(5);
  Rng b = root.child(5);
  Rng c = root.child(6);
  CHECK(a.next_u64() == b.next_u64());
  int differing = 0;
  for (int i = 0; i < 20; ++i)
    if (a.next_u64() != c.next_u64()) ++differing;
  CHECK(differing > 15);
  // Deriving a child does not advance the parent.
  Rng p(9), q(9);
  (void)p.child(0);
  CHECK(p.next_u64() == q.next_u64());
}

TEST_CASE("rng: uniform ranges") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform(2.0, 5.0);
    CHECK(v >= 2.0);
    CHECK(v < 5.0);
    const double w = rng.uniform_open();
    CHECK(w > 0.0);
    CHECK(w < 1.0);
  }
}

TEST_CASE("rng: uniform_int covers [0, n) roughly evenly") {
  Rng rng(2);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const int k = rng.uniform_int(7);
    REQUIRE(k >= 0);
    REQUIRE(k < 7);
    ++counts[static_cast<size_t>(k)];
  }
  for (int c : counts) CHECK(std::abs(c - n / 7) < 500);
}

TEST_CASE("rng: normal moments") {
  Rng rng(3);
  const auto m = sample_moments(100000, [&] { return rng.normal(); });
  CHECK(std::abs(m.mean) < 0.02);
  CHECK(std::abs(m.var - 1.0) < 0.03);
}

TEST_CASE("rng: gamma moments match alpha for both sampler branches") {
  Rng rng(4);
  // alpha >= 1: direct Marsaglia-Tsang squeeze.
  auto m = sample_moments(100000, [&] { return rng.gamma(2.5); });
  CHECK(m.mean == doctest::Approx(2.5).epsilon(0.02));
  CHECK(m.var == doctest::Approx(2.5).epsilon(0.08));
  // alpha < 1: boosted branch.
  m = sample_moments(100000, [&] { return rng.gamma(0.4); });
  CHECK(m.mean == doctest::Approx(0.4).epsilon(0.03));
  CHECK(m.var == doctest::Approx(0.4).epsilon(0.1));
  for (int i = 0; i < 1000; ++i) CHECK(rng.gamma(0.4) > 0.0);
}

TEST_CASE("rng: permutation is a permutation and is not biased at position 0") {
  Rng rng(5);
  auto p = rng.permutation(10);
  std::vector<int> sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 10; ++i) CHECK(sorted[static_cast<size_t>(i)] == i);

  std::vector<int> first(3, 0);
  for (int i = 0; i < 6000; ++i) ++first[static_cast<size_t>(rng.permutation(3)[0])];
  for (int c : first) CHECK(std::abs(c - 2000) < 200);
}

TEST_CASE("sample_beta: Beta(1,1) is uniform, Beta(0.4,0.4) has the closed-form moments") {
  Rng rng(6);
  auto m = sample_moments(100000, [&] { return sample_beta(1.0, rng); });
  CHECK(std::abs(m.mean - 0.5) < 0.01);

  m = sample_moments(100000, [&] { return sample_beta(0.4, rng); });
  // Beta(a,a): mean 1/2, var = a^2 / ((2a)^2 (2a+1)) = 1 / (4 (2a+1)).
  CHECK(std::abs(m.mean - 0.5) < 0.01);
  CHECK(std::abs(m.var - 1.0 / (4.0 * 1.8)) < 0.005);
  for (int i = 0; i < 1000; ++i) {
    const double l = sample_beta(0.4, rng);
    CHECK(l >= 0.0);
    CHECK(l <= 1.0);
  }
}

TEST_CASE("sample_dirichlet: simplex membership and symmetric moments") {
  Rng rng(7);
  SUBCASE("H=1 is the trivial simplex") {
    for (int i = 0; i < 10; ++i) {
      const auto w = sample_dirichlet(0.4, 1, rng);
      REQUIRE(w.size() == 1);
      CHECK(w[0] == 1.0);
    }
  }
  SUBCASE("draws lie on the simplex") {
    for (int i = 0; i < 2000; ++i) {
      const auto w = sample_dirichlet(0.4, 4, rng);
      double sum = 0.0;
      for (double v : w) {
        CHECK(v >= 0.0);
        sum += v;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }
  SUBCASE("H=3 component means are 1/3") {
    double acc[3] = {0, 0, 0};
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const auto w = sample_dirichlet(0.4, 3, rng);
      for (int h = 0; h < 3; ++h) acc[h] += w[static_cast<size_t>(h)];
    }
    for (int h = 0; h < 3; ++h) CHECK(std::abs(acc[h] / n - 1.0 / 3.0) < 0.01);
  }
  SUBCASE("H=2 first-component variance matches the Beta marginal") {
    // Marginal of Dir(0.4, 0.4) is Beta(0.4, 0.4): var = 1/(4*1.8).
    const auto m =
        sample_moments(100000, [&] { return sample_dirichlet(0.4, 2, rng)[0]; });
    CHECK(std::abs(m.var - 1.0 / (4.0 * 1.8)) < 0.005);
  }
}

TEST_CASE("matrix: construction, access, flat layout") {
  Matrix m(2, 3);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.size() == 6);
  for (size_t i = 0; i < m.size(); ++i) CHECK(m.at_flat(i) == 0.0);

  m(1, 2) = 4.5;
  CHECK(m.at_flat(1 * 3 + 2) == 4.5);  // row-major
  m.fill(2.0);
  CHECK(m(0, 0) == 2.0);
  m.set_zero();
  CHECK(m(1, 1) == 0.0);

  CHECK(Matrix().empty());
  CHECK_FALSE(m.empty());
  CHECK(m.same_shape(Matrix(2, 3)));
  CHECK_FALSE(m.same_shape(Matrix(3, 2)));
}

TEST_CASE("matrix: from_rows, matmul, transpose, max_abs_diff") {
  const Matrix a = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  const Matrix b = Matrix::from_rows({{7, 8}, {9, 10}, {11, 12}});
  const Matrix c = matmul(a, b);
  CHECK(c.rows() == 2);
  CHECK(c.cols() == 2);
  CHECK(c(0, 0) == 58.0);
  CHECK(c(0, 1) == 64.0);
  CHECK(c(1, 0) == 139.0);
  CHECK(c(1, 1) == 154.0);

  const Matrix at = transpose(a);
  CHECK(at.rows() == 3);
  CHECK(at.cols() == 2);
  CHECK(at(2, 1) == 6.0);

  Matrix d = a;
  d(1, 0) += 0.25;
  CHECK(max_abs_diff(a, d) == 0.25);
}

TEST_CASE("matrix: all_finite flags NaN and infinity") {
  Matrix m(2, 2, 1.0);
  CHECK(m.all_finite());
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(m.all_finite());
  m(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(m.all_finite());
}

TEST_CASE("sigmoid: anchor values") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786).epsilon(1e-9));
  CHECK(sigmoid(1000.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigmoid(-1000.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sigmoid(-1.0) == doctest::Approx(1.0 - sigmoid(1.0)).epsilon(1e-14));
}

TEST_CASE("softmax_with_temperature: anchor values") {
  const double z_equal[2] = {1.0, 1.0};
  auto p = softmax_with_temperature(std::span<const double>(z_equal, 2), 0.37);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-14));

  const double z[2] = {2.0, 0.0};
  p = softmax_with_temperature(std::span<const double>(z, 2), 1.0);
  CHECK(p[0] == doctest::Approx(0.880797).epsilon(1e-6));
  CHECK(p[1] == doctest::Approx(0.119203).epsilon(1e-5));

  // Small temperature boosts confidence: z/tau = [20, 0].
  p = softmax_with_temperature(std::span<const double>(z, 2), 0.1);
  CHECK(p[1] == doctest::Approx(2.0611536e-9).epsilon(1e-4));
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("softmax_with_temperature: sums to one and never changes the argmax") {
  Rng rng(8);
  const double taus[4] = {0.001, 0.01, 0.1, 1.0};
  for (int i = 0; i < 5000; ++i) {
    double z[2] = {rng.uniform(-30.0, 30.0), rng.uniform(-30.0, 30.0)};
    const int argmax_z = z[0] >= z[1] ? 0 : 1;
    for (double tau : taus) {
      const auto p = softmax_with_temperature(std::span<const double>(z, 2), tau);
      CHECK(std::abs(p[0] + p[1] - 1.0) <= 1e-12);
      CHECK(p[0] >= 0.0);
      CHECK(p[1] >= 0.0);
      const int argmax_p = p[0] >= p[1] ? 0 : 1;
      CHECK(argmax_p == argmax_z);
    }
  }
  CHECK_THROWS_AS(softmax_with_temperature(std::span<const double>(taus, 2), 0.0),
                  InvalidParameterError);
  CHECK_THROWS_AS(softmax_with_temperature(std::span<const double>(taus, 2), -1.0),
                  InvalidParameterError);
}

TEST_CASE("bce_loss: anchor values and the fractional-label identity") {
  CHECK(bce_loss(0.5, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bce_loss(1.0 - 1e-9, 1.0) < 1e-6);  // clamped near-perfect prediction
  CHECK(bce_loss(0.5, 0.3) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bce_loss(0.5, 0.3) ==
        doctest::Approx(0.3 * bce_loss(0.5, 1.0) + 0.7 * bce_loss(0.5, 0.0))
            .epsilon(1e-14));

  // BCE is affine in the label: this is what lets a blended loss collapse to
  // a single fractional target.
  Rng rng(9);
  for (int i = 0; i < 5000; ++i) {
    const double yh = rng.uniform_open();
    const double lam = rng.uniform();
    const double a = static_cast<double>(rng.uniform_int(2));
    const double b = static_cast<double>(rng.uniform_int(2));
    const double lhs = bce_loss(yh, lam * a + (1.0 - lam) * b);
    const double rhs = lam * bce_loss(yh, a) + (1.0 - lam) * bce_loss(yh, b);
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("bce_loss_dyhat: matches central finite differences inside the clamp") {
  const double h = 1e-7;
  for (double yh : {0.2, 0.5, 0.77}) {
    for (double y : {0.0, 0.3, 1.0}) {
      const double num = (bce_loss(yh + h, y) - bce_loss(yh - h, y)) / (2.0 * h);
      CHECK(testutil::rel_error(bce_loss_dyhat(yh, y), num) < 1e-6);
    }
  }
  // Outside the clamp interval the loss is flat, so the derivative is zero.
  CHECK(bce_loss_dyhat(1.0, 1.0) == 0.0);
  CHECK(bce_loss_dyhat(0.0, 0.0) == 0.0);
}

TEST_CASE("finite_difference_check: quadratic scalar") {
  Matrix theta(1, 1);
  theta(0, 0) = 3.0;
  Matrix grad(1, 1);
  grad(0, 0) = 6.0;  // d/dtheta theta^2 at 3
  const auto f = [&] { return theta(0, 0) * theta(0, 0); };
  const auto rep = finite_difference_check(f, {&theta}, {&grad}, 1e-5, 1e-6);
  CHECK(rep.passed);
  CHECK(rep.max_rel_error < 1e-9);
  CHECK(theta(0, 0) == 3.0);  // parameters restored after probing
}

TEST_CASE("finite_difference_check: constant function passes with zero error") {
  Matrix theta(2, 2, 1.5);
  Matrix grad(2, 2, 0.0);
  const auto rep =
      finite_difference_check([] { return 4.0; }, {&theta}, {&grad}, 1e-5, 1e-6);
  CHECK(rep.passed);
  CHECK(rep.max_rel_error == 0.0);
}

TEST_CASE("finite_difference_check: catches a wrong gradient") {
  Matrix theta(1, 1);
  theta(0, 0) = 3.0;
  Matrix grad(1, 1);
  grad(0, 0) = 5.0;  // deliberately wrong
  const auto f = [&] { return theta(0, 0) * theta(0, 0); };
  const auto rep = finite_difference_check(f, {&theta}, {&grad}, 1e-5, 1e-6);
  CHECK_FALSE(rep.passed);
  CHECK(rep.max_rel_error > 0.1);
  CHECK_FALSE(rep.diagnostic.empty());
}

TEST_CASE("finite_difference_check: multi-tensor quadratic form") {
  // f(x, y) = 0.5 x.Ax + y.x with symmetric A; grad_x = Ax + y, grad_y = x.
  Rng rng(10);
  Matrix a(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c <= r; ++c) {
      const double v = rng.uniform(-1.0, 1.0);
      a(r, c) = v;
      a(c, r) = v;
    }
  Matrix x = testutil::random_matrix(3, 1, rng);
  Matrix y = testutil::random_matrix(3, 1, rng);

  Matrix gx(3, 1), gy(3, 1);
  for (int r = 0; r < 3; ++r) {
    double acc = y(r, 0);
    for (int c = 0; c < 3; ++c) acc += a(r, c) * x(c, 0);
    gx(r, 0) = acc;
    gy(r, 0) = x(r, 0);
  }
  const auto f = [&] {
    double quad = 0.0, lin = 0.0;
    for (int r = 0; r < 3; ++r) {
      lin += y(r, 0) * x(r, 0);
      for (int c = 0; c < 3; ++c) quad += x(r, 0) * a(r, c) * x(c, 0);
    }
    return 0.5 * quad + lin;
  };
  const auto rep = finite_difference_check(f, {&x, &y}, {&gx, &gy}, 1e-6, 1e-6);
  CHECK(rep.passed);
  CHECK(rep.per_param_errors.size() == 2);
}
