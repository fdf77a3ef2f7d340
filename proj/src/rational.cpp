#include "logsurf/rational.hpp"

#include <cctype>

namespace logsurf {

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::size_t i = 0;
  auto digits = [&](std::size_t from) {
    std::size_t j = from;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    return j;
  };
  if (s[i] == '+' || s[i] == '-') ++i;
  std::size_t e = digits(i);
  if (e == i) throw std::invalid_argument("bad rational literal: " + s);
  if (e < s.size()) {
    if (s[e] != '/') throw std::invalid_argument("bad rational literal: " + s);
    std::size_t d0 = e + 1;
    std::size_t d1 = digits(d0);
    if (d1 == d0 || d1 != s.size())
      throw std::invalid_argument("bad rational literal: " + s);
  }
  Rat q;
  // gmp's reader dislikes an explicit plus sign
  const std::string body = s[0] == '+' ? s.substr(1) : s;
  if (q.set_str(body, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (::sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& q) {
  Rat c(q);
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Int rat_floor(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

Int rat_ceil(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

std::uint64_t DetRng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rat DetRng::next_rat(long bound, long den) {
  long n = static_cast<long>(next() % static_cast<std::uint64_t>(2 * bound + 1)) - bound;
  long d = static_cast<long>(next() % static_cast<std::uint64_t>(den)) + 1;
  Rat q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace logsurf
