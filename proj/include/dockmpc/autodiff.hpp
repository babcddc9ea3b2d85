// Copyright 2026 The dockmpc Authors
// SPDX-License-Identifier: Apache-2.0

// Automatic differentiation for the problem evaluators.
//
// Dual<W> is forward mode with a fixed-width block of directional derivatives;
// Jacobians are assembled by seeding the decision vector in chunks of kLanes
// coordinates. Var is reverse mode on a per-thread tape and backs the scalar
// gradients the solver needs.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace dockmpc::ad {

template <int W>
struct Dual {
  double v = 0.0;
  std::array<double, W> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit promotion from constants

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < W; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < W; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < W; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    const double q = v * inv;
    for (int i = 0; i < W; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    v = q;
    return *this;
  }
};

// Applies the chain rule for a unary function with value fv and derivative df.
template <int W>
inline Dual<W> chain(const Dual<W>& a, double fv, double df) {
  Dual<W> r(fv);
  for (int i = 0; i < W; ++i) r.d[i] = df * a.d[i];
  return r;
}

template <int W>
inline Dual<W> operator-(const Dual<W>& a) {
  return chain(a, -a.v, -1.0);
}
template <int W>
inline Dual<W> operator+(Dual<W> a, const Dual<W>& b) {
  return a += b;
}
template <int W>
inline Dual<W> operator-(Dual<W> a, const Dual<W>& b) {
  return a -= b;
}
template <int W>
inline Dual<W> operator*(Dual<W> a, const Dual<W>& b) {
  return a *= b;
}
template <int W>
inline Dual<W> operator/(Dual<W> a, const Dual<W>& b) {
  return a /= b;
}
template <int W>
inline Dual<W> operator+(Dual<W> a, double b) {
  a.v += b;
  return a;
}
template <int W>
inline Dual<W> operator+(double b, Dual<W> a) {
  a.v += b;
  return a;
}
template <int W>
inline Dual<W> operator-(Dual<W> a, double b) {
  a.v -= b;
  return a;
}
template <int W>
inline Dual<W> operator-(double b, const Dual<W>& a) {
  return chain(a, b - a.v, -1.0);
}
template <int W>
inline Dual<W> operator*(const Dual<W>& a, double b) {
  return chain(a, a.v * b, b);
}
template <int W>
inline Dual<W> operator*(double b, const Dual<W>& a) {
  return chain(a, a.v * b, b);
}
template <int W>
inline Dual<W> operator/(const Dual<W>& a, double b) {
  return chain(a, a.v / b, 1.0 / b);
}
template <int W>
inline Dual<W> operator/(double b, const Dual<W>& a) {
  const double q = b / a.v;
  return chain(a, q, -q / a.v);
}

template <int W>
inline bool operator<(const Dual<W>& a, const Dual<W>& b) {
  return a.v < b.v;
}
template <int W>
inline bool operator>(const Dual<W>& a, const Dual<W>& b) {
  return a.v > b.v;
}
template <int W>
inline bool operator<(const Dual<W>& a, double b) {
  return a.v < b;
}
template <int W>
inline bool operator>(const Dual<W>& a, double b) {
  return a.v > b;
}

template <int W>
inline Dual<W> sin(const Dual<W>& a) {
  return chain(a, std::sin(a.v), std::cos(a.v));
}
template <int W>
inline Dual<W> cos(const Dual<W>& a) {
  return chain(a, std::cos(a.v), -std::sin(a.v));
}
template <int W>
inline Dual<W> tanh(const Dual<W>& a) {
  const double t = std::tanh(a.v);
  return chain(a, t, 1.0 - t * t);
}
template <int W>
inline Dual<W> sqrt(const Dual<W>& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s);
}
template <int W>
inline Dual<W> atan2(const Dual<W>& y, const Dual<W>& x) {
  const double r2 = x.v * x.v + y.v * y.v;
  Dual<W> r(std::atan2(y.v, x.v));
  const double gx = -y.v / r2;
  const double gy = x.v / r2;
  for (int i = 0; i < W; ++i) r.d[i] = gx * x.d[i] + gy * y.d[i];
  return r;
}

inline double value(double x) { return x; }
template <int W>
inline double value(const Dual<W>& x) {
  return x.v;
}

inline constexpr int kLanes = 8;
using D = Dual<kLanes>;

/// Value and gradient of a scalar function f(span<const D>) -> D.
template <class F>
double gradient(F&& f, std::span<const double> x, std::span<double> grad) {
  const std::size_t n = x.size();
  std::vector<D> xd(n);
  for (std::size_t i = 0; i < n; ++i) xd[i] = D(x[i]);
  double fval = 0.0;
  if (n == 0) return value(f(std::span<const D>(xd)));
  for (std::size_t start = 0; start < n; start += kLanes) {
    const std::size_t stop = std::min(n, start + kLanes);
    for (std::size_t i = start; i < stop; ++i) xd[i].d[i - start] = 1.0;
    const D out = f(std::span<const D>(xd));
    fval = out.v;
    for (std::size_t i = start; i < stop; ++i) {
      grad[i] = out.d[i - start];
      xd[i].d[i - start] = 0.0;
    }
  }
  return fval;
}

/// Values and dense row-major Jacobian (m x n) of f(span<const D>, span<D>).
template <class F>
void jacobian(F&& f, std::span<const double> x, std::size_t m, std::span<double> values,
              std::span<double> jac) {
  const std::size_t n = x.size();
  std::vector<D> xd(n);
  std::vector<D> out(m);
  for (std::size_t i = 0; i < n; ++i) xd[i] = D(x[i]);
  if (n == 0) {
    f(std::span<const D>(xd), std::span<D>(out));
    for (std::size_t r = 0; r < m; ++r) values[r] = out[r].v;
    return;
  }
  for (std::size_t start = 0; start < n; start += kLanes) {
    const std::size_t stop = std::min(n, start + kLanes);
    for (std::size_t i = start; i < stop; ++i) xd[i].d[i - start] = 1.0;
    f(std::span<const D>(xd), std::span<D>(out));
    for (std::size_t r = 0; r < m; ++r) {
      values[r] = out[r].v;
      for (std::size_t i = start; i < stop; ++i) jac[r * n + i] = out[r].d[i - start];
    }
    for (std::size_t i = start; i < stop; ++i) xd[i].d[i - start] = 0.0;
  }
}


// ---------------------------------------------------------------------------
// Reverse mode

class Tape {
 public:
  struct Node {
    int a = -1;
    int b = -1;
    double da = 0.0;
    double db = 0.0;
  };

  int push(int a, double da, int b = -1, double db = 0.0) {
    nodes_.push_back({a, b, da, db});
    return static_cast<int>(nodes_.size()) - 1;
  }
  void clear() { nodes_.clear(); }
  std::size_t size() const { return nodes_.size(); }

  /// Adjoints of every node for a unit seed at `out`.
  void backward(int out, std::vector<double>& adj) const {
    adj.assign(nodes_.size(), 0.0);
    if (out < 0) return;
    adj[static_cast<std::size_t>(out)] = 1.0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      const double g = adj[i];
      if (g == 0.0) continue;
      const Node& n = nodes_[i];
      if (n.a >= 0) adj[static_cast<std::size_t>(n.a)] += g * n.da;
      if (n.b >= 0) adj[static_cast<std::size_t>(n.b)] += g * n.db;
    }
  }

  static Tape*& active() {
    thread_local Tape* tape = nullptr;
    return tape;
  }

 private:
  std::vector<Node> nodes_;
};

/// Scalar recorded on the active tape. Constants carry index -1 and never
/// touch the tape.
struct Var {
  double v = 0.0;
  int i = -1;

  Var() = default;
  Var(double value) : v(value) {}  // NOLINT: implicit promotion from constants
  Var(double value, int index) : v(value), i(index) {}

  Var& operator+=(const Var& o) { return *this = *this + o; }
  Var& operator-=(const Var& o) { return *this = *this - o; }
  Var& operator*=(const Var& o) { return *this = *this * o; }
  Var& operator/=(const Var& o) { return *this = *this / o; }

  friend Var unary(const Var& a, double fv, double df) {
    if (a.i < 0) return Var(fv);
    return Var(fv, Tape::active()->push(a.i, df));
  }
  friend Var binary(const Var& a, const Var& b, double fv, double da, double db) {
    if (a.i < 0 && b.i < 0) return Var(fv);
    if (a.i < 0) return Var(fv, Tape::active()->push(b.i, db));
    if (b.i < 0) return Var(fv, Tape::active()->push(a.i, da));
    return Var(fv, Tape::active()->push(a.i, da, b.i, db));
  }

  friend Var operator+(const Var& a, const Var& b) { return binary(a, b, a.v + b.v, 1.0, 1.0); }
  friend Var operator-(const Var& a, const Var& b) { return binary(a, b, a.v - b.v, 1.0, -1.0); }
  friend Var operator*(const Var& a, const Var& b) { return binary(a, b, a.v * b.v, b.v, a.v); }
  friend Var operator/(const Var& a, const Var& b) {
    const double inv = 1.0 / b.v;
    const double q = a.v * inv;
    return binary(a, b, q, inv, -q * inv);
  }
  friend Var operator-(const Var& a) { return unary(a, -a.v, -1.0); }

  friend bool operator<(const Var& a, const Var& b) { return a.v < b.v; }
  friend bool operator>(const Var& a, const Var& b) { return a.v > b.v; }

  friend Var sin(const Var& a) { return unary(a, std::sin(a.v), std::cos(a.v)); }
  friend Var cos(const Var& a) { return unary(a, std::cos(a.v), -std::sin(a.v)); }
  friend Var tanh(const Var& a) {
    const double t = std::tanh(a.v);
    return unary(a, t, 1.0 - t * t);
  }
  friend Var sqrt(const Var& a) {
    const double r = std::sqrt(a.v);
    return unary(a, r, 0.5 / r);
  }
  friend Var atan2(const Var& y, const Var& x) {
    const double r2 = x.v * x.v + y.v * y.v;
    return binary(y, x, std::atan2(y.v, x.v), x.v / r2, -y.v / r2);
  }
};

inline double value(const Var& x) { return x.v; }

/// Value and gradient of a scalar function f(span<const Var>) -> Var with one
/// forward recording and one reverse sweep.
template <class F>
double reverse_gradient(F&& f, std::span<const double> x, std::span<double> grad) {
  thread_local Tape tape;
  thread_local std::vector<double> adj;
  struct Activate {
    Tape* prev;
    explicit Activate(Tape* t) : prev(Tape::active()) { Tape::active() = t; }
    ~Activate() { Tape::active() = prev; }
  };
  if (Tape::active() == &tape) throw std::logic_error("reverse_gradient is not reentrant");
  Activate guard(&tape);
  tape.clear();
  const std::size_t n = x.size();
  std::vector<Var> xv(n);
  for (std::size_t i = 0; i < n; ++i) xv[i] = Var(x[i], tape.push(-1, 0.0));
  const Var out = f(std::span<const Var>(xv));
  tape.backward(out.i, adj);
  for (std::size_t i = 0; i < n; ++i) grad[i] = adj[i];
  return out.v;
}

}  // namespace dockmpc::ad
