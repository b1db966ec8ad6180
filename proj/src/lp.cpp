#include "gibbs/lp.hpp"

#include <stdexcept>

namespace gibbs {

namespace {

using Row = std::vector<Rational>;

struct Tableau {
  std::vector<Row> rows;  // last entry of each row is the right-hand side
  std::vector<int> basis;
  std::size_t cols = 0;   // number of variable columns

  void pivot(std::size_t r, std::size_t c) {
    Rational piv = rows[r][c];
    for (auto& v : rows[r]) v /= piv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t j = 0; j <= cols; ++j) rows[i][j] -= f * rows[r][j];
    }
    basis[r] = static_cast<int>(c);
  }

  // Bland's rule simplex maximizing cost.x over the allowed columns.
  // Returns false when the objective is unbounded.
  bool run(const Row& cost, const std::vector<bool>& allowed) {
    while (true) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols && enter == cols; ++j) {
        if (!allowed[j]) continue;
        Rational rc = cost[j];
        for (std::size_t i = 0; i < rows.size(); ++i) rc -= cost[basis[i]] * rows[i][j];
        if (rc > 0) enter = j;
      }
      if (enter == cols) return true;
      std::size_t leave = rows.size();
      Rational best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][enter] <= 0) continue;
        Rational ratio = rows[i][cols] / rows[i][enter];
        if (leave == rows.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                  const std::vector<Rational>& c) {
  const std::size_t m = A.size();
  const std::size_t nv = c.size();
  for (const auto& row : A)
    if (row.size() != nv) throw std::invalid_argument("solve_lp: row length mismatch");
  if (b.size() != m) throw std::invalid_argument("solve_lp: rhs length mismatch");

  Tableau t;
  t.cols = nv + m;
  t.rows.assign(m, Row(t.cols + 1, Rational(0)));
  t.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    int s = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < nv; ++j) t.rows[i][j] = s * A[i][j];
    t.rows[i][nv + i] = 1;
    t.rows[i][t.cols] = s * b[i];
    t.basis[i] = static_cast<int>(nv + i);
  }

  Row phase1(t.cols, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[nv + i] = -1;
  std::vector<bool> all(t.cols, true);
  t.run(phase1, all);
  Rational infeas = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (t.basis[i] >= static_cast<int>(nv)) infeas += t.rows[i][t.cols];
  LpResult out;
  if (infeas != 0) return out;

  // Drive zero-level artificials out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < t.rows.size();) {
    if (t.basis[i] < static_cast<int>(nv)) {
      ++i;
      continue;
    }
    std::size_t j = 0;
    while (j < nv && t.rows[i][j] == 0) ++j;
    if (j < nv) {
      t.pivot(i, j);
      ++i;
    } else {
      t.rows.erase(t.rows.begin() + static_cast<long>(i));
      t.basis.erase(t.basis.begin() + static_cast<long>(i));
    }
  }

  Row phase2(t.cols, Rational(0));
  for (std::size_t j = 0; j < nv; ++j) phase2[j] = c[j];
  std::vector<bool> real(t.cols, false);
  for (std::size_t j = 0; j < nv; ++j) real[j] = true;
  if (!t.run(phase2, real)) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.x.assign(nv, Rational(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.basis[i] < static_cast<int>(nv)) out.x[t.basis[i]] = t.rows[i][t.cols];
  out.value = 0;
  for (std::size_t j = 0; j < nv; ++j) out.value += c[j] * out.x[j];
  return out;
}

}  // namespace gibbs
