// Copyright 2026 The pwreg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "pwreg/lp_format.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "pwreg/error.hpp"

namespace pwreg {
namespace {

// Terms per output line; keeps lines well below the 510 character limit of
// common readers.
constexpr int kTermsPerLine = 6;

std::string Number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[40];
  // Print -0 as 0.
  std::snprintf(buf, sizeof(buf), "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

class TermWriter {
 public:
  explicit TermWriter(std::ostringstream& out) : out_(out) {}

  void Add(double coef, const std::string& text) {
    if (count_ > 0 && count_ % kTermsPerLine == 0) out_ << "\n  ";
    if (count_ == 0) {
      out_ << (coef < 0 ? "- " : "");
    } else {
      out_ << (coef < 0 ? " - " : " + ");
    }
    out_ << Number(std::fabs(coef)) << ' ' << text;
    ++count_;
  }
  int count() const { return count_; }

 private:
  std::ostringstream& out_;
  int count_ = 0;
};

std::vector<std::string> Names(const std::vector<std::string>& given, int count, char prefix) {
  std::vector<std::string> names(count);
  for (int i = 0; i < count; ++i) {
    names[i] = i < static_cast<int>(given.size()) && !given[i].empty()
                   ? given[i]
                   : prefix + std::to_string(i);
  }
  return names;
}

// Row-wise copy of a column-major sparse matrix, entries ordered by column.
std::vector<std::vector<std::pair<int, double>>> Rows(const SparseMatrix& a) {
  std::vector<std::vector<std::pair<int, double>>> rows(a.rows());
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      rows[it.row()].emplace_back(col, it.value());
    }
  }
  return rows;
}

void WriteRows(std::ostringstream& out, const SparseMatrix& a, const Eigen::VectorXd& rhs,
               const std::vector<std::string>& row_names, const char* sense,
               const std::vector<std::string>& var_names) {
  const auto rows = Rows(a);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << ' ' << row_names[r] << ": ";
    TermWriter terms(out);
    for (const auto& [col, value] : rows[r]) terms.Add(value, var_names[col]);
    if (terms.count() == 0) out << "0 " << var_names.front();
    out << ' ' << sense << ' ' << Number(rhs[r]) << '\n';
  }
}

}  // namespace

std::string FormatLp(const QuadraticProgram& qp, const std::vector<int>& binaries) {
  qp.Validate();
  const int n = qp.num_variables();
  Require(n > 0, ErrorKind::kInvalidDimension, "program has no variables");
  const auto vars = Names(qp.variable_names, n, 'x');
  std::vector<std::string> rows_in = Names(qp.inequality_names, qp.num_inequalities(), 'r');
  std::vector<std::string> rows_eq = Names(qp.equality_names, qp.num_equalities(), 'e');

  std::ostringstream out;
  out << "Minimize\n obj:";
  {
    std::ostringstream body;
    TermWriter terms(body);
    for (int j = 0; j < n; ++j) {
      if (qp.c[j] != 0.0) terms.Add(qp.c[j], vars[j]);
    }
    // Upper triangle of Q; the bracket is halved by the trailing "/ 2".
    std::map<std::pair<int, int>, double> upper;
    for (int col = 0; col < qp.q.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(qp.q, col); it; ++it) {
        if (it.row() <= col && it.value() != 0.0) upper[{static_cast<int>(it.row()), col}] = it.value();
      }
    }
    if (!upper.empty()) {
      body << (terms.count() > 0 ? " + [ " : "[ ");
      TermWriter quad(body);
      for (const auto& [ij, value] : upper) {
        if (ij.first == ij.second) {
          quad.Add(value, vars[ij.first] + " ^ 2");
        } else {
          quad.Add(2.0 * value, vars[ij.first] + " * " + vars[ij.second]);
        }
      }
      body << " ] / 2";
    }
    if (qp.constant != 0.0) {
      body << (qp.constant < 0 ? " - " : " + ") << Number(std::fabs(qp.constant));
    }
    const std::string text = body.str();
    out << ' ' << (text.empty() ? "0 " + vars.front() : text);
  }
  out << "\nSubject To\n";
  WriteRows(out, qp.a_ineq, qp.b_ineq, rows_in, "<=", vars);
  WriteRows(out, qp.a_eq, qp.b_eq, rows_eq, "=", vars);
  out << "Bounds\n";
  for (int j = 0; j < n; ++j) {
    const double lo = qp.lower[j];
    const double hi = qp.upper[j];
    out << ' ';
    if (std::isinf(lo) && std::isinf(hi)) {
      out << vars[j] << " free";
    } else if (lo == hi) {
      out << vars[j] << " = " << Number(lo);
    } else {
      out << Number(lo) << " <= " << vars[j] << " <= " << Number(hi);
    }
    out << '\n';
  }
  if (!binaries.empty()) {
    out << "Binaries\n";
    for (std::size_t i = 0; i < binaries.size(); ++i) {
      out << ' ' << vars[binaries[i]];
      if (i % kTermsPerLine == kTermsPerLine - 1 || i + 1 == binaries.size()) out << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

std::string FormatLp(const MixedIntegerProgram& mip) {
  return FormatLp(mip.base, mip.binaries);
}

void WriteLpFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  Require(static_cast<bool>(file), ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  file << text;
  file.flush();
  Require(static_cast<bool>(file), ErrorKind::kIo, "failed writing " + path.string());
}

}  // namespace pwreg
