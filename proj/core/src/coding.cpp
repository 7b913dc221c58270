#include "hoarith/coding.hpp"

#include <algorithm>
#include <stdexcept>

namespace hoarith {

Nat pair(const Nat& x, const Nat& y) {
    const Nat s = x + y;
    return (s * (s + 1)) / 2 + x;
}

std::pair<Nat, Nat> split(const Nat& z) {
    // s is the largest value with s(s+1)/2 <= z.
    Nat s = (isqrt(z * 8 + 1) - 1) / 2;
    const Nat x = z - (s * (s + 1)) / 2;
    return {x, s - x};
}

Nat tuple_encode(const std::vector<Nat>& xs) {
    if (xs.empty()) throw std::invalid_argument("tuple_encode: empty tuple");
    Nat acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) acc = pair(xs[i], acc);
    return acc;
}

std::vector<Nat> tuple_decode(const Nat& z, std::size_t k) {
    if (k == 0) throw std::invalid_argument("tuple_decode: arity must be positive");
    std::vector<Nat> out;
    out.reserve(k);
    Nat rest = z;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        auto [head, tail] = split(rest);
        out.push_back(std::move(head));
        rest = std::move(tail);
    }
    out.push_back(std::move(rest));
    return out;
}

Nat beta_index(const Nat& w, const Nat& i) {
    const auto [b, c] = split(w);
    return b % ((i + 1) * c + 1);
}

SeqCodeParts seq_encode_parts(const std::vector<Nat>& xs) {
    if (xs.empty()) throw std::invalid_argument("seq_encode: empty sequence");
    const std::size_t n = xs.size();

    Nat l = 1;
    for (std::size_t k = 2; k <= n; ++k) l = lcm(l, Nat(k));
    Nat top = *std::max_element(xs.begin(), xs.end());
    if (top.is_zero()) top = 1;
    const Nat c = ((top + l - 1) / l) * l;

    // Invariant: b < prod, and b = xs[j] mod m_j for every processed j.
    mpz_class b = 0;
    mpz_class prod = 1;
    const mpz_class cz = c.to_mpz();
    for (std::size_t j = 0; j < n; ++j) {
        const mpz_class m = cz * static_cast<unsigned long>(j + 1) + 1;
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), prod.get_mpz_t(), m.get_mpz_t()) == 0) {
            throw std::logic_error("seq_encode: moduli are not pairwise coprime");
        }
        mpz_class delta = xs[j].to_mpz() - b;
        mpz_class t = delta * inv;
        mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
        b += prod * t;
        prod *= m;
    }
    return {Nat(b), c};
}

Nat seq_encode(const std::vector<Nat>& xs) {
    auto parts = seq_encode_parts(xs);
    return pair(parts.b, parts.c);
}

}  // namespace hoarith
