#include "multival/scramble.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "multival/error.hpp"

namespace multival {

PrimeFieldMatrix::PrimeFieldMatrix(std::size_t n, std::vector<Rational> entries)
    : n_(n), entries_(std::move(entries)) {
  recompute_determinant();
}

PrimeFieldMatrix PrimeFieldMatrix::identity(std::size_t n) {
  std::vector<Rational> e(n * n, Rational(0));
  for (std::size_t k = 0; k < n; ++k) e[k * n + k] = 1;
  return PrimeFieldMatrix(n, std::move(e));
}

PrimeFieldMatrix PrimeFieldMatrix::parse(std::string_view text) {
  std::vector<std::vector<Rational>> rows;
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  std::size_t start = 0;
  while (true) {
    std::size_t bar = s.find('|', start);
    std::string row = s.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
    std::vector<Rational> entries;
    std::size_t rs = 0;
    while (true) {
      std::size_t comma = row.find(',', rs);
      FieldElem q = parse_elem(row.substr(rs, comma == std::string::npos ? std::string::npos : comma - rs),
                               FieldId::Rationals);
      entries.push_back(q.re());
      if (comma == std::string::npos) break;
      rs = comma + 1;
    }
    rows.push_back(std::move(entries));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  const std::size_t n = rows.size();
  std::vector<Rational> flat;
  for (auto& r : rows) {
    if (r.size() != n) throw Error(ErrorKind::ParseError, "matrix is not square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return PrimeFieldMatrix(n, std::move(flat));
}

void PrimeFieldMatrix::subtract_row_multiple(std::size_t target, std::size_t source, const Rational& c) {
  for (std::size_t col = 0; col < n_; ++col) entries_[target * n_ + col] -= c * entries_[source * n_ + col];
  // Elementary transvections keep the determinant.
}

void PrimeFieldMatrix::recompute_determinant() {
  std::vector<Rational> a = entries_;
  Rational det = 1;
  for (std::size_t col = 0; col < n_; ++col) {
    std::size_t pivot = col;
    while (pivot < n_ && a[pivot * n_ + col] == 0) ++pivot;
    if (pivot == n_) {
      det_ = 0;
      return;
    }
    if (pivot != col) {
      for (std::size_t k = 0; k < n_; ++k) std::swap(a[pivot * n_ + k], a[col * n_ + k]);
      det = -det;
    }
    det *= a[col * n_ + col];
    for (std::size_t row = col + 1; row < n_; ++row) {
      Rational f = a[row * n_ + col] / a[col * n_ + col];
      if (f == 0) continue;
      for (std::size_t k = col; k < n_; ++k) a[row * n_ + k] -= f * a[col * n_ + k];
    }
  }
  det_ = det;
}

std::vector<FieldElem> PrimeFieldMatrix::apply(std::span<const FieldElem> xs) const {
  if (xs.size() != n_) throw Error(ErrorKind::SpecMismatch, "matrix and tuple sizes differ");
  std::vector<FieldElem> out;
  for (std::size_t row = 0; row < n_; ++row) {
    FieldElem acc(xs.empty() ? FieldId::Rationals : xs.front().field());
    for (std::size_t col = 0; col < n_; ++col) {
      acc += FieldElem(acc.field(), at(row, col)) * xs[col];
    }
    out.push_back(acc);
  }
  return out;
}

bool PrimeFieldMatrix::is_integral() const {
  for (const auto& e : entries_) {
    if (e.get_den() != 1) return false;
  }
  return true;
}

std::string PrimeFieldMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t row = 0; row < n_; ++row) {
    if (row) os << "|";
    for (std::size_t col = 0; col < n_; ++col) {
      if (col) os << ",";
      os << at(row, col).get_str();
    }
  }
  return os.str();
}

namespace {

void check_fields(std::span<const FieldElem> xs, std::span<const Valuation> vals) {
  for (const auto& v : vals) {
    for (const auto& x : xs) {
      if (x.field() != v.field()) throw Error(ErrorKind::FieldMismatch, "tuple and valuations live in different fields");
    }
  }
}

// vv[i][j] = val_i(x_j)
std::vector<std::vector<Value>> value_table(std::span<const FieldElem> xs, std::span<const Valuation> vals) {
  std::vector<std::vector<Value>> t(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    for (const auto& x : xs) t[i].push_back(val(vals[i], x));
  }
  return t;
}

std::size_t count_discrepancy(const std::vector<std::vector<Value>>& table) {
  std::size_t count = 0;
  for (const auto& row : table) {
    if (row.empty()) continue;
    Value lo = *std::min_element(row.begin(), row.end());
    for (const auto& v : row) count += (v > lo) ? 1 : 0;
  }
  return count;
}

}  // namespace

Integer scramble_step(const FieldElem& z, const FieldElem& w, std::span<const Valuation> vals) {
  check_fields(std::span<const FieldElem>(&z, 1), vals);
  check_fields(std::span<const FieldElem>(&w, 1), vals);
  if (w.is_zero()) return Integer(0);
  const FieldElem ratio = z / w;
  std::vector<ResidueElem> avoid;
  for (const auto& v : vals) avoid.push_back(residue(v, ratio));

  // Each finite residue excludes one class mod p_i, so some c below prod p_i passes.
  for (Integer c = 0;; ++c) {
    bool ok = true;
    for (std::size_t i = 0; i < vals.size() && ok; ++i) {
      if (!avoid[i].is_infinite() && residue_of_integer(vals[i], c) == avoid[i]) ok = false;
    }
    if (ok) return c;
  }
}

std::size_t discrepancy(std::span<const FieldElem> xs, std::span<const Valuation> vals) {
  check_fields(xs, vals);
  return count_discrepancy(value_table(xs, vals));
}

bool is_scrambled(std::span<const FieldElem> xs, std::span<const Valuation> vals) {
  check_fields(xs, vals);
  std::size_t zeros = 0;
  for (const auto& x : xs) zeros += x.is_zero() ? 1 : 0;
  if (zeros == xs.size()) return true;
  if (zeros > 0) return false;
  return count_discrepancy(value_table(xs, vals)) == 0;
}

ScrambleTrace scramble(std::span<const FieldElem> xs, std::span<const Valuation> vals) {
  if (vals.empty()) throw Error(ErrorKind::InvalidSpec, "scramble needs at least one valuation");
  check_fields(xs, vals);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (xs[j].is_zero()) throw Error(ErrorKind::ZeroEntry, "tuple entry " + std::to_string(j + 1) + " is zero");
  }

  ScrambleTrace trace;
  trace.initial.assign(xs.begin(), xs.end());
  trace.matrix = PrimeFieldMatrix::identity(xs.size());
  std::vector<FieldElem> cur = trace.initial;
  auto table = value_table(cur, vals);
  std::size_t disc = count_discrepancy(table);
  trace.initial_discrepancy = disc;

  while (disc > 0) {
    // Lexicographically least offending (valuation i, entry j), paired with the least k
    // attaining the minimum of val_i, so that entry j drops to the minimum.
    std::size_t vi = 0, target = 0, source = 0;
    bool found = false;
    for (std::size_t i = 0; i < vals.size() && !found; ++i) {
      const auto& row = table[i];
      auto lo_it = std::min_element(row.begin(), row.end());
      for (std::size_t j = 0; j < row.size() && !found; ++j) {
        if (row[j] > *lo_it) {
          vi = i;
          target = j;
          source = static_cast<std::size_t>(lo_it - row.begin());
          found = true;
        }
      }
    }
    Integer c = scramble_step(cur[target], cur[source], vals);
    cur[target] -= FieldElem::from_integer(cur[target].field(), c) * cur[source];
    trace.matrix.subtract_row_multiple(target, source, Rational(c));
    table = value_table(cur, vals);
    std::size_t next = count_discrepancy(table);
    if (next >= disc) {
      throw Error(ErrorKind::NonDecreasingDiscrepancy,
                  "discrepancy went from " + std::to_string(disc) + " to " + std::to_string(next));
    }
    disc = next;
    trace.steps.push_back({target, source, c, vi, disc});
  }
  trace.final = cur;
  return trace;
}

}  // namespace multival
