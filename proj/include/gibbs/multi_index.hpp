#pragma once

#include "gibbs/rational.hpp"

#include <string>
#include <vector>

namespace gibbs {

// Exponent vector in N^n. Ordered lexicographically as a std::vector so it
// can key std::map; the partial order is available through leq/less.
using MultiIndex = std::vector<int>;

int degree(const MultiIndex& b);
bool leq(const MultiIndex& a, const MultiIndex& b);   // componentwise
bool less(const MultiIndex& a, const MultiIndex& b);  // leq and a != b
MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
MultiIndex unit_index(int n, int j);
bool is_even(const MultiIndex& b);
double factorial(const MultiIndex& b);
double binomial(const MultiIndex& a, const MultiIndex& b);
Rational binomial_exact(const MultiIndex& a, const MultiIndex& b);
Rational dot(const MultiIndex& b, const std::vector<int>& r);
std::string to_string(const MultiIndex& b);

// All gamma with 0 <= gamma <= beta, in lexicographic order.
std::vector<MultiIndex> box_below(const MultiIndex& beta);

}  // namespace gibbs
