#include "mathcast/simplifier.hpp"

#include <map>

#include "mathcast/error.hpp"
#include "mathcast/registry.hpp"

namespace mathcast {
namespace {

constexpr std::size_t kMaxTerms = 4000;
constexpr long long kMaxExpansionPower = 8;

[[noreturn]] void too_big(const std::string& what) {
  throw Error(ErrorCode::kUnsupportedNotation, "normal form " + what);
}

struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational make(__int128 n, __int128 d) {
    if (d == 0) too_big("divides by zero");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    const __int128 limit = static_cast<__int128>(1) << 62;
    if (n > limit || n < -limit || d > limit) too_big("coefficient overflows");
    return {static_cast<long long>(n), static_cast<long long>(d)};
  }
  Rational operator+(const Rational& o) const {
    return make(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                static_cast<__int128>(den) * o.den);
  }
  Rational operator*(const Rational& o) const {
    return make(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
  }
  Rational inverse() const { return make(den, num); }
  bool zero() const { return num == 0; }
  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
};

using Monomial = std::map<std::string, long long>;
using Poly = std::map<Monomial, Rational>;

const std::string kImaginary = "c:i";

void add_term(Poly& p, const Monomial& m, const Rational& c) {
  auto it = p.find(m);
  if (it == p.end()) {
    if (!c.zero()) p.emplace(m, c);
  } else {
    it->second = it->second + c;
    if (it->second.zero()) p.erase(it);
  }
  if (p.size() > kMaxTerms) too_big("has too many terms");
}

Poly constant(const Rational& c) {
  Poly p;
  add_term(p, {}, c);
  return p;
}

Poly atom(const std::string& key, long long exponent = 1) {
  Poly p;
  p.emplace(Monomial{{key, exponent}}, Rational{1, 1});
  return p;
}

Poly add(const Poly& a, const Poly& b, bool negate = false) {
  Poly out = a;
  for (const auto& [m, c] : b) add_term(out, m, negate ? c * Rational{-1, 1} : c);
  return out;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Monomial m = ma;
      Rational c = ca * cb;
      for (const auto& [k, e] : mb) {
        long long& slot = m[k];
        slot += e;
        if (slot == 0) m.erase(k);
      }
      auto it = m.find(kImaginary);
      if (it != m.end()) {
        long long e = it->second;
        long long r = ((e % 4) + 4) % 4;
        if (r >= 2) c = c * Rational{-1, 1};
        if (r % 2 == 0) {
          m.erase(it);
        } else {
          it->second = 1;
        }
      }
      add_term(out, m, c);
    }
  }
  return out;
}

bool is_constant(const Poly& p, Rational* value = nullptr) {
  if (p.empty()) {
    if (value) *value = {0, 1};
    return true;
  }
  if (p.size() == 1 && p.begin()->first.empty()) {
    if (value) *value = p.begin()->second;
    return true;
  }
  return false;
}

std::string poly_string(const Poly& p) {
  if (p.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : p) {
    if (!s.empty()) s += " + ";
    s += c.str();
    for (const auto& [k, e] : m) s += "*{" + k + "}^" + std::to_string(e);
  }
  return s;
}

Poly inverse(const Poly& p) {
  Rational c;
  if (is_constant(p, &c)) return constant(c.inverse());
  if (p.size() == 1) {
    Monomial m;
    for (const auto& [k, e] : p.begin()->first) m[k] = -e;
    Poly out;
    out.emplace(m, p.begin()->second.inverse());
    return out;
  }
  return atom("p:" + poly_string(p), -1);
}

Poly int_power(const Poly& base, long long n) {
  if (n == 0) return constant({1, 1});
  if (n < 0) return int_power(inverse(base), -n);
  if (base.size() > 1 && n > kMaxExpansionPower) return atom("p:" + poly_string(base), n);
  Poly out = constant({1, 1});
  for (long long i = 0; i < n; ++i) out = mul(out, base);
  return out;
}

Rational parse_number(const std::string& text) {
  __int128 num = 0, den = 1;
  bool frac = false;
  for (char ch : text) {
    if (ch == '.') {
      frac = true;
      continue;
    }
    num = num * 10 + (ch - '0');
    if (frac) den *= 10;
    if (num > (static_cast<__int128>(1) << 100)) too_big("literal too long");
  }
  return Rational::make(num, den);
}

Poly normal(const ExprPtr& e);

std::string key_of(const Expr& e) {
  std::string k = std::to_string(static_cast<int>(e.kind)) + ":" + e.text;
  if (e.entry) k += ":" + e.entry->name;
  if (e.primes) k += "'" + std::to_string(e.primes);
  k += "(";
  for (const ExprPtr& a : e.args) k += poly_string(normal(a)) + ";";
  k += ")";
  if (!e.bound.var.empty()) {
    k += "[" + e.bound.var;
    for (const ExprPtr& b : {e.bound.lower, e.bound.upper, e.bound.membership, e.order}) {
      k += "|" + (b ? poly_string(normal(b)) : std::string("-"));
    }
    k += "|" + std::to_string(static_cast<int>(e.bound.direction)) + "]";
  }
  return k;
}

Poly normal(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::kNumber:
      return constant(parse_number(e->text));
    case ExprKind::kVariable:
      if (e->args.empty() && e->primes == 0) return atom("v:" + e->text);
      return atom(key_of(*e));
    case ExprKind::kConstant:
      return atom("c:" + e->text);
    case ExprKind::kParen:
      return normal(e->args[0]);
    case ExprKind::kAdd: {
      Poly out;
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        out = add(out, normal(e->args[i]), e->ops[i] == '-');
      }
      return out;
    }
    case ExprKind::kMul: {
      Poly out = constant({1, 1});
      for (std::size_t i = 0; i < e->args.size(); ++i) {
        Poly f = normal(e->args[i]);
        out = mul(out, e->ops[i] == '/' ? inverse(f) : f);
      }
      return out;
    }
    case ExprKind::kDivide:
      return mul(normal(e->args[0]), inverse(normal(e->args[1])));
    case ExprKind::kPower: {
      Poly base = normal(e->args[0]);
      Poly expo = normal(e->args[1]);
      Rational r;
      if (is_constant(expo, &r) && r.den == 1) return int_power(base, r.num);
      return atom("pow(" + poly_string(base) + "," + poly_string(expo) + ")");
    }
    default:
      return atom(key_of(*e));
  }
}

}  // namespace

std::string canonical_form(const ExprPtr& expr) { return poly_string(normal(expr)); }

bool difference_is_zero(const ExprPtr& lhs, const ExprPtr& rhs) {
  return add(normal(lhs), normal(rhs), true).empty();
}

}  // namespace mathcast
