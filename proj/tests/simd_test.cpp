#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "k2t/error.hpp"
#include "k2t/rng.hpp"
#include "k2t/simd/kernels.hpp"

namespace k2t::simd {
namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform() * 2.0 - 1.0;
  return v;
}

std::vector<Isa> available() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (isa_available(isa)) out.push_back(isa);
  }
  return out;
}

TEST(Simd, ScalarAlwaysAvailable) {
  EXPECT_TRUE(isa_available(Isa::Scalar));
  EXPECT_NO_THROW(kernels_for(Isa::Scalar));
}

TEST(Simd, UnavailableVariantThrows) {
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (!isa_available(isa)) {
      EXPECT_THROW(kernels_for(isa), InvalidArgument);
    }
  }
}

// Every vector variant must agree with the scalar reference over all tail
// lengths. Reductions may reassociate, so dot and sum_squares get a relative
// bound; elementwise kernels must match bit for bit.
TEST(Simd, VariantsMatchScalarReference) {
  const auto& ref = scalar::table();
  if (available().empty()) GTEST_SKIP() << "no vector variant on this CPU";
  Rng rng(7);
  for (Isa isa : available()) {
    const auto& k = kernels_for(isa);
    for (std::size_t n = 0; n <= 67; ++n) {
      const auto a = random_vector(rng, n);
      const auto b = random_vector(rng, n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
      EXPECT_NEAR(k.dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n),
                  1e-14 * (1.0 + mag))
          << isa_name(isa) << " n=" << n;
      const double sq = ref.sum_squares(a.data(), n);
      EXPECT_NEAR(k.sum_squares(a.data(), n), sq, 1e-14 * (1.0 + sq)) << isa_name(isa);

      auto acc1 = a, acc2 = a;
      ref.add_into(acc1.data(), b.data(), n);
      k.add_into(acc2.data(), b.data(), n);
      EXPECT_EQ(acc1, acc2) << isa_name(isa) << " n=" << n;

      auto s1 = a, s2 = a;
      ref.scale(s1.data(), 0.37, n);
      k.scale(s2.data(), 0.37, n);
      EXPECT_EQ(s1, s2) << isa_name(isa) << " n=" << n;
    }
  }
}

TEST(Simd, ForceIsaSwitchesActiveTable) {
  const Isa before = active_isa();
  force_isa(Isa::Scalar);
  EXPECT_EQ(active_isa(), Isa::Scalar);
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  EXPECT_DOUBLE_EQ(dot(a, b), 32.0);
  force_isa(before);
  EXPECT_EQ(active_isa(), before);
}

TEST(Simd, SpanHelpers) {
  const std::vector<double> a{3, 4}, b{4, -3}, zero{0, 0};
  EXPECT_DOUBLE_EQ(norm(a), 5.0);
  EXPECT_DOUBLE_EQ(cosine(a, a), 1.0);
  EXPECT_NEAR(cosine(a, b), 0.0, 1e-15);
  EXPECT_EQ(cosine(a, zero), 0.0);
  EXPECT_THROW(dot(a, std::vector<double>{1}), InvalidArgument);
  std::vector<double> acc{1, 1};
  add_into(acc, a);
  EXPECT_EQ(acc, (std::vector<double>{4, 5}));
  scale(acc, 2.0);
  EXPECT_EQ(acc, (std::vector<double>{8, 10}));
}

}  // namespace
}  // namespace k2t::simd
