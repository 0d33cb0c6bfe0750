#include "dltl/rational.hpp"

#include "dltl/errors.hpp"

#include <cctype>
#include <ostream>

namespace dltl {

Rational::Rational(long n, long d) {
    if (d == 0) throw ValidationError("zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw ValidationError("division by zero");
    v_ /= o.v_;
    return *this;
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

mpz_class ten_pow(unsigned long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    auto bad = [&]() { return ValidationError("malformed rational '" + std::string(text) + "'"); };
    if (s.empty()) throw bad();

    bool neg = false;
    if (s.front() == '-' || s.front() == '+') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto n = s.substr(0, slash), d = s.substr(slash + 1);
        if (!all_digits(n) || !all_digits(d)) throw bad();
        mpz_class den(std::string(d), 10);
        if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
        mpq_class q(mpz_class(std::string(n), 10), den);
        q.canonicalize();
        return Rational(neg ? mpq_class(-q) : q);
    }

    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        auto es = s.substr(e + 1);
        bool eneg = false;
        if (!es.empty() && (es.front() == '-' || es.front() == '+')) {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        if (!all_digits(es) || es.size() > 6) throw bad();
        exp10 = std::stol(std::string(es));
        if (eneg) exp10 = -exp10;
        s = s.substr(0, e);
    }

    std::string digits;
    long frac = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty()) throw bad();
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) throw bad();
        digits = std::string(ip) + std::string(fp);
        frac = static_cast<long>(fp.size());
    } else {
        if (!all_digits(s)) throw bad();
        digits = std::string(s);
    }

    mpq_class q{mpz_class(digits, 10)};
    long shift = exp10 - frac;
    if (shift > 0) q *= mpq_class(ten_pow(static_cast<unsigned long>(shift)));
    if (shift < 0) q /= mpq_class(ten_pow(static_cast<unsigned long>(-shift)));
    q.canonicalize();
    return Rational(neg ? mpq_class(-q) : q);
}

std::string Rational::to_string() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_str();
}

std::string Rational::to_fraction() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::size_t Rational::hash() const {
    std::size_t h = mpz_get_ui(v_.get_num_mpz_t()) * 0x9e3779b97f4a7c15ULL;
    h ^= mpz_get_ui(v_.get_den_mpz_t()) + 0x7f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(sgn(v_) + 1);
}

Rational pow(const Rational& base, unsigned exp) {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), base.raw().get_num_mpz_t(), exp);
    mpz_pow_ui(d.get_mpz_t(), base.raw().get_den_mpz_t(), exp);
    return Rational(mpq_class(n, d));
}

Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

}  // namespace dltl
