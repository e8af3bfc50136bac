#pragma once

// P = TP/|D|, R = TP/|G|, F1 = 2PR/(P+R) in exact rational arithmetic.

#include <cstdint>

#include <boost/rational.hpp>

namespace oracle {

using Q = boost::rational<std::int64_t>;

struct ExactPrf {
    Q p, r, f1;
};

inline ExactPrf exact_prf(std::int64_t tp, std::int64_t nd, std::int64_t ng) {
    ExactPrf e;
    e.p = nd == 0 ? Q(0) : Q(tp, nd);
    e.r = Q(tp, ng);
    e.f1 = e.p + e.r == Q(0) ? Q(0) : Q(2) * e.p * e.r / (e.p + e.r);
    return e;
}

inline double to_double(const Q& q) { return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator()); }

} // namespace oracle
