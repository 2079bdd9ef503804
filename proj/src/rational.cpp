#include "cantor/rational.hpp"

#include <cmath>
#include <cstdlib>

#include "cantor/errors.hpp"

namespace cantor {

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) {
        throw PreconditionError("rational with zero denominator");
    }
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat pow2(long k) {
    Int one = 1;
    if (k >= 0) {
        return Rat(one << static_cast<unsigned long>(k));
    }
    return make_rat(one, one << static_cast<unsigned long>(-k));
}

Rat rat_pow(const Rat& r, unsigned long k) {
    Rat out(1);
    Rat base = r;
    while (k > 0) {
        if (k & 1) {
            out *= base;
        }
        base *= base;
        k >>= 1;
    }
    return out;
}

Int binomial(unsigned long n, unsigned long k) {
    Int out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

Rat parse_rat(std::string_view text) {
    if (text.empty()) {
        throw ParseError("empty rational literal");
    }
    const std::string s(text);
    auto digits_ok = [](std::string_view part, bool allow_sign) {
        if (part.empty()) {
            return false;
        }
        std::size_t i = 0;
        if (allow_sign && (part[0] == '-' || part[0] == '+')) {
            i = 1;
        }
        if (i == part.size()) {
            return false;
        }
        for (; i < part.size(); ++i) {
            if (part[i] < '0' || part[i] > '9') {
                return false;
            }
        }
        return true;
    };
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            if (!digits_ok(s, true)) {
                throw ParseError("bad rational literal: " + s);
            }
            return Rat(Int(s));
        }
        const std::string num = s.substr(0, slash);
        const std::string den = s.substr(slash + 1);
        if (!digits_ok(num, true) || !digits_ok(den, false)) {
            throw ParseError("bad rational literal: " + s);
        }
        Int d(den);
        if (d == 0) {
            throw ParseError("zero denominator in rational literal: " + s);
        }
        return make_rat(Int(num), d);
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal: " + s);
    }
}

std::string rat_string(const Rat& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string decimal_string(const Rat& r, int digits) {
    if (digits < 0) {
        throw PreconditionError("negative digit count");
    }
    const bool negative = sgn(r) < 0;
    Rat a = abs(r);
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    // round(|r| * 10^digits) with ties away from zero
    Int scaled_num = a.get_num() * scale;
    Int q, rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), scaled_num.get_mpz_t(),
                a.get_den().get_mpz_t());
    if (rem * 2 >= a.get_den()) {
        q += 1;
    }
    Int whole = q / scale;
    Int frac = q % scale;
    std::string out = negative && (whole != 0 || frac != 0) ? "-" : "";
    out += whole.get_str();
    if (digits > 0) {
        std::string f = frac.get_str();
        out += "." + std::string(static_cast<std::size_t>(digits) - f.size(), '0') + f;
    }
    return out;
}

Rat log2_approx(const Rat& r, long grid) {
    if (sgn(r) <= 0) {
        throw PreconditionError("log2 of a non-positive rational");
    }
    if (grid <= 0) {
        throw PreconditionError("log2 grid must be positive");
    }
    const Int& p = r.get_num();
    const Int& q = r.get_den();
    // Exact case: the ratio is a power of two.
    if (p == 1) {
        const std::size_t bits = mpz_sizeinbase(q.get_mpz_t(), 2);
        if (mpz_scan1(q.get_mpz_t(), 0) == bits - 1) {
            return Rat(-static_cast<long>(bits - 1));
        }
    }
    if (q == 1) {
        const std::size_t bits = mpz_sizeinbase(p.get_mpz_t(), 2);
        if (mpz_scan1(p.get_mpz_t(), 0) == bits - 1) {
            return Rat(static_cast<long>(bits - 1));
        }
    }
    // log2(p/q) = (ep + log2 dp) - (eq + log2 dq) with d in [0.5, 1);
    // double precision leaves ~1e-15 relative error, far below the grid.
    long ep = 0, eq = 0;
    const double dp = mpz_get_d_2exp(&ep, p.get_mpz_t());
    const double dq = mpz_get_d_2exp(&eq, q.get_mpz_t());
    const double value =
        (static_cast<double>(ep) - static_cast<double>(eq)) +
        (std::log2(dp) - std::log2(dq));
    const double scaled = value * static_cast<double>(grid);
    Int ticks;
    mpz_set_d(ticks.get_mpz_t(), std::nearbyint(scaled));
    return make_rat(ticks, Int(grid));
}

}  // namespace cantor
