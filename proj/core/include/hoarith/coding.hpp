#pragma once

#include "hoarith/nat.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace hoarith {

// Cantor pairing: <x,y> = (x+y)(x+y+1)/2 + x.
Nat pair(const Nat& x, const Nat& y);
std::pair<Nat, Nat> split(const Nat& z);

// Right-nested tuples: <x1,...,xn> = <x1,<x2,...,xn>>, and <x> = x.
Nat tuple_encode(const std::vector<Nat>& xs);
std::vector<Nat> tuple_decode(const Nat& z, std::size_t k);

// Sequence codes. A code w = <b,c> indexes as (w)_i = b mod (1 + (i+1)c).
Nat beta_index(const Nat& w, const Nat& i);

struct SeqCodeParts {
    Nat b;
    Nat c;
};

// Picks c divisible by every prime below |xs| with c >= max(xs), which makes
// the moduli 1+(i+1)c pairwise coprime and larger than every element, then
// solves for b by incremental Chinese remaindering.
SeqCodeParts seq_encode_parts(const std::vector<Nat>& xs);
Nat seq_encode(const std::vector<Nat>& xs);

}  // namespace hoarith
