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

#include "pwreg/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <optional>
#include <thread>

#include "pwreg/error.hpp"

namespace pwreg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Programs up to this many variables use the splitting method and fall back
// to the dense interior point method when it stalls or does not polish.
// Larger programs (big-M rows slow the splitting method down badly) solve
// every node with the sparse interior point method.
constexpr int kDenseLimit = 400;
// Iteration cap of the splitting method before that fallback.
constexpr int kSmallAdmmIterations = 3000;

struct Node {
  std::int64_t id = 0;
  int depth = 0;
  double bound = -kInf;
  // Bounds of the binaries, indexed like MixedIntegerProgram::binaries.
  std::vector<double> lo;
  std::vector<double> hi;
  Eigen::VectorXd warm_z;
  Eigen::VectorXd warm_y;
};

// SOS1 propagation on per-variable bounds. Returns false if some assignment
// row cannot be satisfied.
bool PropagateRows(const std::vector<std::vector<int>>& rows, Eigen::VectorXd& lower,
                   Eigen::VectorXd& upper) {
  for (const auto& row : rows) {
    int ones = 0;
    int open = 0;
    int last_open = -1;
    for (int b : row) {
      if (lower[b] >= 0.5) {
        ++ones;
      } else if (upper[b] >= 0.5) {
        ++open;
        last_open = b;
      }
    }
    if (ones > 1 || (ones == 0 && open == 0)) return false;
    if (ones == 1) {
      for (int b : row) {
        if (lower[b] < 0.5) upper[b] = 0.0;
      }
    } else if (open == 1) {
      lower[last_open] = 1.0;
      upper[last_open] = 1.0;
    }
  }
  return true;
}

double Fractionality(double v) { return std::min(std::fabs(v), std::fabs(1.0 - v)); }

class Search {
 public:
  Search(const MixedIntegerProgram& mip, const BnbConfig& cfg)
      : mip_(mip), cfg_(cfg), start_(std::chrono::steady_clock::now()) {
    const int n = mip.base.num_variables();
    binary_pos_.assign(n, -1);
    for (std::size_t k = 0; k < mip.binaries.size(); ++k) {
      binary_pos_[mip.binaries[k]] = static_cast<int>(k);
    }
    relaxed_ = mip.base;
    for (int b : mip.binaries) {
      relaxed_.lower[b] = std::max(0.0, relaxed_.lower[b]);
      relaxed_.upper[b] = std::min(1.0, relaxed_.upper[b]);
    }
    small_ = n <= kDenseLimit;
    node_qp_ = cfg.qp;
    if (small_) node_qp_.max_iter = std::min(node_qp_.max_iter, kSmallAdmmIterations);
  }

  BnbResult Run() {
    Node root;
    root.id = next_id_++;
    root.lo.resize(mip_.binaries.size());
    root.hi.resize(mip_.binaries.size());
    for (std::size_t k = 0; k < mip_.binaries.size(); ++k) {
      root.lo[k] = relaxed_.lower[mip_.binaries[k]];
      root.hi[k] = relaxed_.upper[mip_.binaries[k]];
    }
    Push(std::move(root));

    const int workers = std::max(1, cfg_.workers);
    if (workers == 1) {
      Worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w) pool.emplace_back([this] { Worker(); });
      for (auto& t : pool) t.join();
    }
    return Finish();
  }

 private:
  double PruneTolerance() const {
    return std::max(cfg_.abs_gap, cfg_.rel_gap * std::max(1.0, std::fabs(incumbent_obj_)));
  }

  bool Prunable(double bound) const {
    return has_incumbent_ && bound >= incumbent_obj_ - PruneTolerance();
  }

  // Priority order: true if a should be explored after b.
  bool Later(const Node& a, const Node& b) const {
    if (!plunging_ && a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }

  void Push(Node node) {
    open_.push_back(std::move(node));
    std::push_heap(open_.begin(), open_.end(),
                   [this](const Node& a, const Node& b) { return Later(a, b); });
  }

  Node Pop() {
    std::pop_heap(open_.begin(), open_.end(),
                  [this](const Node& a, const Node& b) { return Later(a, b); });
    Node node = std::move(open_.back());
    open_.pop_back();
    return node;
  }

  void Reheap() {
    std::make_heap(open_.begin(), open_.end(),
                   [this](const Node& a, const Node& b) { return Later(a, b); });
  }

  double ElapsedSeconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  void RecordPruned(double bound) {
    if (bound < pruned_floor_) pruned_floor_ = bound;
  }

  // Candidate incumbents are offered under the lock.
  void Offer(QpSolution&& candidate) {
    if (candidate.objective < incumbent_obj_) {
      incumbent_obj_ = candidate.objective;
      incumbent_ = std::move(candidate);
      has_incumbent_ = true;
      if (plunging_) {
        plunging_ = false;
        Reheap();
      }
    }
  }

  struct Outcome {
    std::vector<Node> children;
    std::vector<QpSolution> candidates;
    bool processed = false;
    double bound = -kInf;
    double fractionality = 0.0;
    bool pruned_by_bound = false;
  };

  void Worker() {
    std::optional<QpSolver> splitting;
    if (small_) splitting.emplace(relaxed_, node_qp_);
    QpSolver* solver = splitting ? &*splitting : nullptr;
    std::unique_lock<std::mutex> lock(mu_);
    while (true) {
      cv_.wait(lock, [this] { return stop_ || !open_.empty() || active_ == 0; });
      if (stop_ || (open_.empty() && active_ == 0)) break;
      Node node = Pop();
      if (Prunable(node.bound)) {
        if (node.bound < incumbent_obj_) RecordPruned(node.bound);
        continue;
      }
      if (nodes_explored_ >= cfg_.node_limit) {
        Push(std::move(node));
        Stop(BnbStatus::kNodeLimit);
        break;
      }
      if (ElapsedSeconds() >= cfg_.time_limit_seconds) {
        Push(std::move(node));
        Stop(BnbStatus::kTimeLimit);
        break;
      }
      ++active_;
      ++nodes_explored_;
      const double snapshot = has_incumbent_ ? incumbent_obj_ - PruneTolerance() : kInf;
      lock.unlock();

      Outcome out = Process(solver, node, snapshot);

      lock.lock();
      --active_;
      for (auto& c : out.candidates) Offer(std::move(c));
      if (out.pruned_by_bound) RecordPruned(out.bound);
      for (auto& child : out.children) {
        child.id = next_id_++;
        if (Prunable(child.bound)) {
          if (child.bound < incumbent_obj_) RecordPruned(child.bound);
          continue;
        }
        Push(std::move(child));
      }
      if (cfg_.on_node && out.processed) {
        BnbEvent e;
        e.node = node.id;
        e.depth = node.depth;
        e.bound = out.bound;
        e.incumbent = incumbent_obj_;
        e.fractionality = out.fractionality;
        cfg_.on_node(e);
      }
      cv_.notify_all();
    }
    cv_.notify_all();
  }

  void Stop(BnbStatus status) {
    if (!stop_) limit_status_ = status;
    stop_ = true;
    cv_.notify_all();
  }

  QpSolution SolveFixed(QpSolver* solver, const Eigen::VectorXd& lower,
                        const Eigen::VectorXd& upper, const Eigen::VectorXd& warm) {
    if (!solver) return Certify(SolveIpm(lower, upper), lower, upper);
    solver->SetVariableBounds(lower, upper);
    solver->WarmStart(warm);
    return Certify(solver->Solve(), lower, upper);
  }

  // Interior point solve of the relaxation under the given bounds: dense for
  // small programs, sparse otherwise.
  QpSolution SolveIpm(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) const {
    QuadraticProgram fixed = relaxed_;
    fixed.lower = lower;
    fixed.upper = upper;
    QpSolution t = small_ ? SolveQpDense(fixed) : SolveQpSparse(fixed);
    t.polished = t.status == QpStatus::kOptimal;
    return t;
  }

  // Candidates must be accurate in absolute terms: a residual that is small
  // relative to the big-M rows can still move the objective visibly. An
  // unpolished solution is re-solved with the interior point method.
  QpSolution Certify(QpSolution s, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    if (!s.polished) {
      QpSolution t = SolveIpm(lower, upper);
      if (t.status == QpStatus::kOptimal) s = std::move(t);
    }
    for (int b : mip_.binaries) s.z[b] = lower[b];
    s.objective = mip_.base.Objective(s.z);
    return s;
  }

  // Score of each binary for the rounding heuristic: the summed value of the
  // corresponding segment over the points of the unit.
  Eigen::VectorXd SegmentScores(const Eigen::VectorXd& z) const {
    const int n = mip_.base.num_variables();
    Eigen::VectorXd score = Eigen::VectorXd::Constant(n, -kInf);
    if (!mip_.base.layout || mip_.base.layout->n_units == 0) {
      for (int b : mip_.binaries) score[b] = z[b];
      return score;
    }
    const ProgramLayout& L = *mip_.base.layout;
    for (int b : mip_.binaries) score[b] = 0.0;
    for (int i = 0; i < L.n_points; ++i) {
      const int u = L.unit_of_point[i];
      for (int k = 0; k < L.p1; ++k) {
        double v = 0.0;
        for (int j = 0; j < L.r1; ++j) v += z[L.V(k, j)] * L.g_values(i, j);
        score[L.Delta(u, k)] += v;
      }
      for (int k = 0; k < L.p2; ++k) {
        double v = 0.0;
        for (int j = 0; j < L.r2; ++j) v += z[L.W(k, j)] * L.h_values(i, j);
        score[L.Gamma(u, k)] += v;
      }
    }
    return score;
  }

  Outcome Process(QpSolver* solver, const Node& node, double prune_at) {
    Outcome out;
    Eigen::VectorXd lower = relaxed_.lower;
    Eigen::VectorXd upper = relaxed_.upper;
    for (std::size_t k = 0; k < mip_.binaries.size(); ++k) {
      lower[mip_.binaries[k]] = node.lo[k];
      upper[mip_.binaries[k]] = node.hi[k];
    }
    if (!PropagateRows(mip_.assignment_rows, lower, upper)) return out;

    QpSolution rel;
    if (solver) {
      solver->SetVariableBounds(lower, upper);
      if (node.warm_z.size() > 0) {
        solver->WarmStart(node.warm_z, &node.warm_y);
      } else {
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(relaxed_.num_variables());
        solver->WarmStart(zero);
      }
      rel = solver->Solve();
      if (rel.status == QpStatus::kIterationLimit) rel = SolveIpm(lower, upper);
    } else {
      rel = SolveIpm(lower, upper);
    }
    out.processed = true;
    if (rel.status == QpStatus::kInfeasible) return out;

    double bound = node.bound;
    if (rel.status == QpStatus::kOptimal) bound = std::max(bound, rel.objective);
    out.bound = bound;

    int branch = -1;
    double best_frac = -1.0;
    bool any_free = false;
    for (int b : mip_.binaries) {
      if (lower[b] >= upper[b]) continue;
      any_free = true;
      const double f = Fractionality(rel.z[b]);
      if (f > best_frac) {
        best_frac = f;
        branch = b;
      }
    }
    out.fractionality = std::max(0.0, best_frac);
    if (bound >= prune_at) {
      out.pruned_by_bound = true;
      return out;
    }

    if (!any_free || best_frac <= cfg_.int_tol) {
      // Integral relaxation: this node is a leaf.
      if (!any_free && rel.status == QpStatus::kOptimal) {
        out.candidates.push_back(Certify(std::move(rel), lower, upper));
        return out;
      }
      Eigen::VectorXd fl = lower;
      Eigen::VectorXd fu = upper;
      for (int b : mip_.binaries) {
        const double v = std::round(std::clamp(rel.z[b], lower[b], upper[b]));
        fl[b] = v;
        fu[b] = v;
      }
      if (PropagateRows(mip_.assignment_rows, fl, fu)) {
        QpSolution leaf = SolveFixed(solver, fl, fu, rel.z);
        if (leaf.status == QpStatus::kOptimal) {
          out.candidates.push_back(std::move(leaf));
          return out;
        }
      }
      if (!any_free) return out;
      // Rounding did not give a usable point; keep branching.
    }

    // Rounding heuristic.
    {
      const Eigen::VectorXd score = SegmentScores(rel.z);
      Eigen::VectorXd fl = lower;
      Eigen::VectorXd fu = upper;
      bool ok = true;
      for (const auto& row : mip_.assignment_rows) {
        int pick = -1;
        for (int b : row) {
          if (lower[b] >= 0.5) pick = b;
        }
        if (pick < 0) {
          for (int b : row) {
            if (upper[b] >= 0.5 && (pick < 0 || score[b] > score[pick])) pick = b;
          }
        }
        if (pick < 0) {
          ok = false;
          break;
        }
        for (int b : row) {
          fl[b] = b == pick ? 1.0 : 0.0;
          fu[b] = fl[b];
        }
      }
      if (ok) {
        QpSolution h = SolveFixed(solver, fl, fu, rel.z);
        if (h.status == QpStatus::kOptimal) out.candidates.push_back(std::move(h));
      }
    }

    if (branch < 0) return out;
    const int pos = binary_pos_[branch];
    Node down;
    Node up;
    for (Node* c : {&down, &up}) {
      c->depth = node.depth + 1;
      c->bound = bound;
      c->lo.resize(node.lo.size());
      c->hi.resize(node.hi.size());
      for (std::size_t k = 0; k < mip_.binaries.size(); ++k) {
        c->lo[k] = lower[mip_.binaries[k]];
        c->hi[k] = upper[mip_.binaries[k]];
      }
      c->warm_z = rel.z;
      c->warm_y = rel.y;
    }
    down.hi[pos] = 0.0;
    up.lo[pos] = 1.0;
    if (rel.z[branch] >= 0.5) {
      out.children.push_back(std::move(up));
      out.children.push_back(std::move(down));
    } else {
      out.children.push_back(std::move(down));
      out.children.push_back(std::move(up));
    }
    return out;
  }

  BnbResult Finish() {
    BnbResult r;
    r.nodes_explored = nodes_explored_;
    r.has_incumbent = has_incumbent_;
    double bound = std::min(pruned_floor_, incumbent_obj_);
    for (const Node& n : open_) bound = std::min(bound, n.bound);
    if (has_incumbent_) {
      r.incumbent = std::move(incumbent_);
      r.bound = std::min(bound, incumbent_obj_);
      r.gap = std::max(0.0, (incumbent_obj_ - r.bound) / std::max(1.0, std::fabs(incumbent_obj_)));
    } else {
      r.bound = bound;
      r.gap = kInf;
    }
    if (!stop_) {
      r.status = BnbStatus::kOptimal;
    } else if (has_incumbent_ && r.gap <= cfg_.rel_gap) {
      r.status = BnbStatus::kGapLimit;
    } else {
      r.status = limit_status_;
    }
    return r;
  }

  const MixedIntegerProgram& mip_;
  const BnbConfig& cfg_;
  QpSettings node_qp_;
  bool small_ = false;
  const std::chrono::steady_clock::time_point start_;
  QuadraticProgram relaxed_;
  std::vector<int> binary_pos_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<Node> open_;
  bool plunging_ = true;
  bool stop_ = false;
  BnbStatus limit_status_ = BnbStatus::kNodeLimit;
  int active_ = 0;
  std::int64_t next_id_ = 0;
  std::int64_t nodes_explored_ = 0;
  bool has_incumbent_ = false;
  double incumbent_obj_ = kInf;
  QpSolution incumbent_;
  double pruned_floor_ = kInf;
};

}  // namespace

std::string_view ToString(BnbStatus status) {
  switch (status) {
    case BnbStatus::kOptimal: return "optimal";
    case BnbStatus::kGapLimit: return "gap_limit";
    case BnbStatus::kNodeLimit: return "node_limit";
    case BnbStatus::kTimeLimit: return "time_limit";
  }
  return "unknown";
}

std::string FormatEvent(const BnbEvent& e) {
  const auto num = [](double v) {
    if (!std::isfinite(v)) return std::string("null");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  return "{\"node\":" + std::to_string(e.node) + ",\"depth\":" + std::to_string(e.depth) +
         ",\"bound\":" + num(e.bound) + ",\"incumbent\":" + num(e.incumbent) +
         ",\"fractionality\":" + num(e.fractionality) + "}";
}

BnbResult SolveMiqp(const MixedIntegerProgram& mip, const BnbConfig& cfg) {
  Require(cfg.rel_gap >= 0.0 && cfg.abs_gap >= 0.0 && cfg.int_tol >= 0.0,
          ErrorKind::kInvalidConfig, "branch-and-bound tolerances must be non-negative");
  Require(cfg.workers >= 1, ErrorKind::kInvalidConfig, "workers must be at least 1");
  Require(cfg.node_limit >= 1, ErrorKind::kInvalidConfig, "node limit must be positive");
  mip.Validate();
  Search search(mip, cfg);
  return search.Run();
}

QpSolution SolveNodeRelaxation(const MixedIntegerProgram& mip,
                               const std::vector<int>& fixing,
                               const QpSettings& settings) {
  Require(fixing.size() == mip.binaries.size(), ErrorKind::kInvalidDimension,
          "one fixing entry per binary expected");
  QuadraticProgram qp = mip.base;
  for (std::size_t k = 0; k < fixing.size(); ++k) {
    const int b = mip.binaries[k];
    qp.lower[b] = std::max(0.0, qp.lower[b]);
    qp.upper[b] = std::min(1.0, qp.upper[b]);
    if (fixing[k] == 0) qp.upper[b] = 0.0;
    if (fixing[k] == 1) qp.lower[b] = 1.0;
    Require(qp.lower[b] <= qp.upper[b], ErrorKind::kInvalidConfig,
            "fixing contradicts the binary's bounds");
  }
  if (!PropagateRows(mip.assignment_rows, qp.lower, qp.upper)) {
    QpSolution s;
    s.z = Eigen::VectorXd::Zero(qp.num_variables());
    s.status = QpStatus::kInfeasible;
    s.objective = kInf;
    return s;
  }
  return SolveQp(qp, settings);
}

}  // namespace pwreg
