#include "ultradiff/field/sampling.hpp"

namespace ultradiff {

long Rng::range(long lo, long hi) {
  if (hi < lo) throw InvalidArgument("empty range");
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(engine_() % span);
}

Rng Rng::fork(std::uint64_t salt) {
  return Rng(engine_() ^ (salt * 0x9E3779B97F4A7C15ULL));
}

mpz_class random_digits(Rng& rng, std::uint32_t p, unsigned count) {
  mpz_class r = 0;
  mpz_class scale = 1;
  for (unsigned i = 0; i < count; ++i) {
    r += scale * rng.digit(p);
    scale *= p;
  }
  return r;
}

namespace {

long random_prime_to_p(Rng& rng, std::uint32_t p, long height) {
  for (;;) {
    long n = rng.range(1, height);
    if (n % static_cast<long>(p) != 0) return n;
  }
}

}  // namespace

mpq_class random_unit_rational(Rng& rng, std::uint32_t p, long height) {
  long num = random_prime_to_p(rng, p, height);
  long den = random_prime_to_p(rng, p, height);
  if (rng.coin()) num = -num;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

mpq_class random_rational_with_valuation(Rng& rng, std::uint32_t p, long v, long height) {
  mpq_class u = random_unit_rational(rng, p, height);
  Prime prime(p);
  if (v >= 0) return u * mpq_class(prime.power(static_cast<unsigned long>(v)));
  return u / mpq_class(prime.power(static_cast<unsigned long>(-v)));
}

mpq_class random_bounded_rational(Rng& rng, std::uint32_t p, long max_valuation,
                                  bool allow_zero, long height) {
  if (allow_zero && rng.range(0, 9) == 0) return 0;
  return random_rational_with_valuation(rng, p, rng.range(0, max_valuation), height);
}

std::vector<mpq_class> sample_rationals(const Ball& ball, std::uint32_t p, Rng& rng,
                                        unsigned digits) {
  Prime prime(p);
  mpq_class scale = ball.min_valuation() >= 0
                        ? mpq_class(prime.power(static_cast<unsigned long>(ball.min_valuation())))
                        : mpq_class(mpz_class(1),
                                    prime.power(static_cast<unsigned long>(-ball.min_valuation())));
  std::vector<mpq_class> out;
  out.reserve(ball.dim());
  for (std::size_t i = 0; i < ball.dim(); ++i) {
    mpq_class q = ball.center()[i] + scale * mpq_class(random_digits(rng, p, digits));
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

PadicVector sample(const Ball& ball, const Field& field, Rng& rng, unsigned digits) {
  return PadicVector::lift(field, sample_rationals(ball, field.p(), rng, digits));
}

PadicVector sample(const Ball& ball, const Field& field, std::uint64_t seed, unsigned digits) {
  Rng rng(seed);
  return sample(ball, field, rng, digits);
}

std::vector<mpq_class> sample_unit_sphere(Rng& rng, std::uint32_t p, std::size_t dim,
                                          unsigned digits) {
  if (dim == 0) throw InvalidArgument("unit sphere of dimension zero");
  std::vector<mpq_class> out(dim);
  auto forced = static_cast<std::size_t>(rng.range(0, static_cast<long>(dim) - 1));
  for (std::size_t i = 0; i < dim; ++i) {
    mpz_class z = random_digits(rng, p, digits);
    if (i == forced) {
      // Replace the leading digit by a nonzero one.
      mpz_class lead = z % p;
      z += static_cast<long>(1 + rng.digit(p - 1)) - lead;
    }
    out[i] = mpq_class(z);
  }
  return out;
}

}  // namespace ultradiff
