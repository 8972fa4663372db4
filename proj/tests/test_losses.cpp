#include <cmath>
#include <random>

#include "doctest.h"
#include "unimix/losses.hpp"

using namespace unimix;

namespace {

const LossKind kAllKinds[] = {LossKind::ce, LossKind::bayias_ce, LossKind::focal, LossKind::cb,
                              LossKind::cdt, LossKind::ldam, LossKind::la};

// Kinds whose value depends on z only through softmax of shifted logits.
const LossKind kSoftmaxFamily[] = {LossKind::ce,   LossKind::bayias_ce, LossKind::focal,
                                   LossKind::cb,   LossKind::ldam,      LossKind::la};

double plain_ce(const Eigen::VectorXd& z, int y) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < z.size(); ++k) s += std::exp(z[k]);
  return std::log(s) - z[y];
}

Eigen::VectorXd fd_grad(const LossSpec& spec, const Eigen::VectorXd& z, int y, double h = 1e-5) {
  Eigen::VectorXd g(z.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    Eigen::VectorXd zp = z;
    Eigen::VectorXd zm = z;
    zp[k] += h;
    zm[k] -= h;
    g[k] = (loss_value(spec, zp, y) - loss_value(spec, zm, y)) / (2.0 * h);
  }
  return g;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ClassPrior prior2(double a, double b) { return ClassPrior(vec({a, b})); }

}  // namespace

TEST_CASE("softmax") {
  CHECK(softmax(vec({0, 0})).isApprox(vec({0.5, 0.5}), 1e-15));
  const Eigen::VectorXd big = softmax(vec({1000, 0}));
  CHECK(big[0] == 1.0);
  CHECK(big[1] >= 0.0);
  CHECK(std::isfinite(big[1]));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N(0.0, 3.0);
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd z(6);
    for (auto& v : z) v = N(rng);
    const Eigen::VectorXd p = softmax(z);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-12);
    const Eigen::VectorXd q = softmax((z.array() + 17.3).matrix());
    CHECK((p - q).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("Bayias margins") {
  const Eigen::VectorXd zero = bayias_margin(ClassPrior::uniform(5));
  CHECK(zero.cwiseAbs().maxCoeff() <= 1e-15);
  const Eigen::VectorXd m = bayias_margin(prior2(0.8, 0.2));
  CHECK(m[0] == doctest::Approx(std::log(1.6)).epsilon(1e-15));
  CHECK(m[1] == doctest::Approx(std::log(0.4)).epsilon(1e-15));
  CHECK(m[0] == doctest::Approx(0.470004).epsilon(1e-6));
  CHECK(m[1] == doctest::Approx(-0.916291).epsilon(1e-6));

  const ClassPrior p(vec({0.5, 0.3, 0.2}));
  CHECK(bayias_margin(p, p).cwiseAbs().maxCoeff() == 0.0);
  // Balanced target through the general form matches the balanced form.
  CHECK((bayias_margin(p, ClassPrior::uniform(3)) - bayias_margin(p)).cwiseAbs().maxCoeff() <= 1e-15);
  // Subtraction form: ln pi - ln pi'.
  const ClassPrior q(vec({0.1, 0.3, 0.6}));
  const Eigen::VectorXd g = bayias_margin(p, q);
  for (int c = 0; c < 3; ++c) CHECK(g[c] == doctest::Approx(std::log(p[c]) - std::log(q[c])).epsilon(1e-15));

  CHECK_THROWS(bayias_margin(ClassPrior(vec({1.0, 0.0}))));
}

TEST_CASE("bayias_ce identities") {
  const Eigen::VectorXd m = bayias_margin(prior2(0.8, 0.2));
  CHECK(bayias_ce(vec({0, 0}), 0, m) == doctest::Approx(-std::log(1.6 / 2.0)).epsilon(1e-14));
  CHECK(bayias_ce(vec({0, 0}), 0, m) == doctest::Approx(0.223144).epsilon(1e-6));

  std::mt19937_64 rng(7);
  std::normal_distribution<double> N(0.0, 2.0);
  std::uniform_int_distribution<int> Cdist(2, 12);
  for (int t = 0; t < 10000; ++t) {
    const int C = Cdist(rng);
    Eigen::VectorXd z(C);
    Eigen::VectorXd margin(C);
    for (auto& v : z) v = N(rng);
    for (auto& v : margin) v = N(rng);
    const int y = std::uniform_int_distribution<int>(0, C - 1)(rng);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(C);
    // Zero margins go through the same evaluation path as plain CE.
    CHECK(bayias_ce(z, y, zero) == cross_entropy((z + zero).eval(), y));
    CHECK(std::abs(bayias_ce(z, y, zero) - plain_ce(z, y)) <= 1e-12);
    CHECK(std::abs(bayias_ce(z, y, margin) - bayias_ce_pairwise(z, y, margin)) <= 1e-12);
  }

  Eigen::VectorXd dominant = Eigen::VectorXd::Zero(4);
  dominant[2] = 60.0;
  CHECK(bayias_ce_pairwise(dominant, 2, Eigen::VectorXd::Zero(4)) < 1e-20);
  for (int C : {2, 5, 100}) {
    CHECK(bayias_ce_pairwise(Eigen::VectorXd::Zero(C), 0, Eigen::VectorXd::Zero(C)) ==
          doctest::Approx(std::log(static_cast<double>(C))).epsilon(1e-14));
  }
}

TEST_CASE("zoo reductions to CE") {
  const std::vector<int> counts = {500, 120, 30, 5};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N(0.0, 2.0);
  LossParams focal0;
  focal0.gamma = 0.0;
  LossParams la0;
  la0.la_tau = 0.0;
  const LossSpec ce = make_loss_spec(LossKind::ce, {}, counts);
  const LossSpec focal = make_loss_spec(LossKind::focal, focal0, counts);
  const LossSpec la = make_loss_spec(LossKind::la, la0, counts);
  const LossSpec bayias_balanced = make_loss_spec(LossKind::bayias_ce, {}, {10, 10, 10, 10});
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd z(4);
    for (auto& v : z) v = N(rng);
    const int y = t % 4;
    CHECK(std::abs(loss_value(focal, z, y) - loss_value(ce, z, y)) <= 1e-12);
    CHECK(std::abs(loss_value(la, z, y) - loss_value(ce, z, y)) <= 1e-12);
    CHECK(std::abs(loss_value(bayias_balanced, z, y) - loss_value(ce, z, y)) <= 1e-12);
    CHECK(std::abs(loss_value(ce, z, y) - plain_ce(z, y)) <= 1e-12);
  }
}

TEST_CASE("zoo formulas on fixed inputs") {
  const std::vector<int> counts = {400, 100, 25};
  const Eigen::VectorXd z = vec({0.3, -1.2, 0.8});
  const int y = 1;
  LossParams p;
  p.gamma = 2.0;
  p.beta = 0.99;
  p.ldam_c = 0.5;
  p.la_tau = 1.5;

  const double ce = plain_ce(z, y);
  const double py = std::exp(-ce);
  CHECK(loss_value(make_loss_spec(LossKind::focal, p, counts), z, y) ==
        doctest::Approx(std::pow(1.0 - py, 2.0) * ce).epsilon(1e-13));

  const double w = (1.0 - 0.99) / (1.0 - std::pow(0.99, 100));
  CHECK(loss_value(make_loss_spec(LossKind::cb, p, counts), z, y) == doctest::Approx(w * ce).epsilon(1e-13));

  Eigen::VectorXd zc = z;
  for (int k = 0; k < 3; ++k) zc[k] = z[k] / std::pow(400.0 / counts[k], 2.0);
  CHECK(loss_value(make_loss_spec(LossKind::cdt, p, counts), z, y) == doctest::Approx(plain_ce(zc, y)).epsilon(1e-13));

  Eigen::VectorXd zl = z;
  zl[y] -= 0.5 / std::pow(100.0, 0.25);
  CHECK(loss_value(make_loss_spec(LossKind::ldam, p, counts), z, y) == doctest::Approx(plain_ce(zl, y)).epsilon(1e-13));

  Eigen::VectorXd za = z;
  for (int k = 0; k < 3; ++k) za[k] += 1.5 * std::log(counts[k] / 525.0);
  CHECK(loss_value(make_loss_spec(LossKind::la, p, counts), z, y) == doctest::Approx(plain_ce(za, y)).epsilon(1e-13));
}

TEST_CASE("LDAM margin is applied to the true logit only") {
  const std::vector<int> counts = {400, 100, 25};
  const LossSpec ldam = make_loss_spec(LossKind::ldam, {}, counts);
  const Eigen::VectorXd z = vec({0.3, -1.2, 0.8});
  const int y = 2;
  Eigen::VectorXd wrong = z;
  for (int k = 0; k < 3; ++k) wrong[k] -= 0.5 / std::pow(static_cast<double>(counts[k]), 0.25);
  Eigen::VectorXd right = z;
  right[y] -= 0.5 / std::pow(25.0, 0.25);
  CHECK(loss_value(ldam, z, y) == doctest::Approx(plain_ce(right, y)).epsilon(1e-14));
  CHECK(std::abs(loss_value(ldam, z, y) - plain_ce(wrong, y)) > 1e-3);
}

TEST_CASE("CB with equal counts is CE times a constant") {
  const std::vector<int> counts = {50, 50, 50};
  const LossSpec cb = make_loss_spec(LossKind::cb, {}, counts);
  const LossSpec ce = make_loss_spec(LossKind::ce, {}, counts);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd z(3);
    for (auto& v : z) v = N(rng);
    const Eigen::VectorXd g1 = loss_grad(cb, z, t % 3);
    const Eigen::VectorXd g2 = loss_grad(ce, z, t % 3);
    const double cosine = g1.dot(g2) / (g1.norm() * g2.norm());
    CHECK(std::abs(cosine - 1.0) <= 1e-10);
    CHECK(loss_value(cb, z, t % 3) / loss_value(ce, z, t % 3) == doctest::Approx(cb.weight[0]).epsilon(1e-12));
  }
}

TEST_CASE("analytic gradients match central differences") {
  const std::vector<int> counts = {300, 90, 40, 12, 4};
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N(0.0, 1.5);
  LossParams p;
  p.gamma = 2.0;
  for (LossKind kind : kAllKinds) {
    const LossSpec spec = make_loss_spec(kind, p, counts);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
      Eigen::VectorXd z(5);
      for (auto& v : z) v = N(rng);
      const int y = t % 5;
      const Eigen::VectorXd g = loss_grad(spec, z, y);
      const Eigen::VectorXd fd = fd_grad(spec, z, y);
      for (int k = 0; k < 5; ++k) worst = std::max(worst, std::abs(g[k] - fd[k]) / std::max(1.0, std::abs(fd[k])));
      Eigen::VectorXd g2(5);
      CHECK(loss_value_grad(spec, z, y, g2) == loss_value(spec, z, y));
      CHECK(g2 == g);
    }
    INFO("loss ", to_string(kind), " worst rel err ", worst);
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("softmax-family shift invariance and zero-sum gradients") {
  const std::vector<int> counts = {300, 90, 40, 12, 4};
  std::mt19937_64 rng(13);
  std::normal_distribution<double> N(0.0, 1.5);
  for (LossKind kind : kSoftmaxFamily) {
    const LossSpec spec = make_loss_spec(kind, {}, counts);
    for (int t = 0; t < 200; ++t) {
      Eigen::VectorXd z(5);
      for (auto& v : z) v = N(rng);
      const int y = t % 5;
      const Eigen::VectorXd shifted = (z.array() + N(rng) * 5.0).matrix();
      CHECK(std::abs(loss_value(spec, z, y) - loss_value(spec, shifted, y)) <= 1e-10);
      CHECK(std::abs(loss_grad(spec, z, y).sum()) <= 1e-12);
    }
  }
  const LossSpec bal = make_loss_spec(LossKind::bayias_ce, {}, {7, 7});
  CHECK(loss_grad(bal, vec({0, 0}), 0).isApprox(vec({-0.5, 0.5}), 1e-15));
}

TEST_CASE("mixed VRM loss") {
  const std::vector<int> counts = {100, 20, 5};
  const LossSpec spec = make_loss_spec(LossKind::bayias_ce, {}, counts);
  const Eigen::VectorXd z = vec({0.2, -0.4, 1.1});
  const double li = loss_value(spec, z, 0);
  const double lj = loss_value(spec, z, 2);
  CHECK(mixed_vrm_loss(spec, z, 0, 2, 1.0) == li);
  CHECK(mixed_vrm_loss(spec, z, 1, 1, 0.5) == doctest::Approx(loss_value(spec, z, 1)).epsilon(1e-15));
  CHECK(mixed_vrm_loss(spec, z, 0, 2, 0.3) == doctest::Approx(0.3 * li + 0.7 * lj).epsilon(1e-15));
  const Eigen::VectorXd g = mixed_vrm_grad(spec, z, 0, 2, 0.3);
  CHECK(g.isApprox(0.3 * loss_grad(spec, z, 0) + 0.7 * loss_grad(spec, z, 2), 1e-14));
}

TEST_CASE("loss spec validation") {
  const std::vector<int> counts = {10, 5};
  LossParams bad;
  bad.beta = 1.0;
  CHECK_THROWS(make_loss_spec(LossKind::cb, bad, counts));
  bad = {};
  bad.gamma = -1.0;
  CHECK_THROWS(make_loss_spec(LossKind::focal, bad, counts));
  CHECK_THROWS(make_loss_spec(LossKind::ce, {}, {10, 0}));
  CHECK(parse_loss_kind("ldam") == LossKind::ldam);
  CHECK_THROWS(parse_loss_kind("hinge"));
}
