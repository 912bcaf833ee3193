#pragma once
// Reference matrices built by brute force, independent of the simulator kernels.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// 1-qubit matrix on qubit q of an n-qubit register (qubit 0 = low bit), via Kronecker products.
inline Mat embed(const Eigen::Matrix2cd& g, int q, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int k = n - 1; k >= 0; --k) {
    const Mat f = k == q ? Mat(g) : Mat(Mat::Identity(2, 2));
    Mat next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
    out = next;
  }
  return out;
}

inline Eigen::Matrix2cd h() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << s, s, s, -s;
  return m;
}
inline Eigen::Matrix2cd rz(double t) {
  Eigen::Matrix2cd m;
  m << std::polar(1.0, -t / 2), 0, 0, std::polar(1.0, t / 2);
  return m;
}
inline Eigen::Matrix2cd ry(double t) {
  Eigen::Matrix2cd m;
  m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  return m;
}
inline Eigen::Matrix2cd x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

// Basis permutation |i> -> |f(i)>.
template <typename F>
Mat permutation(Eigen::Index d, F f) {
  Mat p = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) p(f(i), i) = 1.0;
  return p;
}

inline Mat cnot(int c, int t, int n) {
  return permutation(Eigen::Index{1} << n, [&](Eigen::Index i) { return ((i >> c) & 1) ? i ^ (Eigen::Index{1} << t) : i; });
}

// Unitary DFT with kernel e^{sign 2 pi i jk / d}.
inline Mat dft(Eigen::Index d, double sign = 1.0) {
  Mat f(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k)
      f(k, j) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), sign * 2.0 * std::numbers::pi * double(j * k) / double(d));
  return f;
}

// max |a - e^{i phi} b| with phi fixed by the largest entry of b.
inline double phase_distance(const Mat& a, const Mat& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  const Cx ph = a(r, c) / b(r, c);
  return (a - (ph / std::abs(ph)) * b).cwiseAbs().maxCoeff();
}

}  // namespace oracle
