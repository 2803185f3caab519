#include <Eigen/Cholesky>

#include "wfollow/errors.hpp"
#include "wfollow/tracker.hpp"

namespace wfollow::tracker {
namespace {

// Noise standard deviations are proportional to the box height.
constexpr double kStdWeightPosition = 1.0 / 20.0;
constexpr double kStdWeightVelocity = 1.0 / 160.0;

Matrix8 transition() {
  Matrix8 f = Matrix8::Identity();
  for (int i = 0; i < 4; ++i) f(i, 4 + i) = 1.0;
  return f;
}

Eigen::Matrix<double, 4, 8> observation() {
  Eigen::Matrix<double, 4, 8> h = Eigen::Matrix<double, 4, 8>::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

Matrix8 symmetrize(const Matrix8& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Vector4 to_measurement(const Box& box) {
  Vector4 z;
  z << box.u, box.v, box.w / box.h, box.h;
  return z;
}

Box to_box(const Vector8& mean) {
  const double h = mean(3);
  return {mean(0), mean(1), mean(2) * h, h};
}

KalmanState kf_initiate(const Vector4& measurement) {
  KalmanState s;
  s.mean.head<4>() = measurement;
  s.mean.tail<4>().setZero();
  const double h = measurement(3);
  Vector8 std;
  std << 2 * kStdWeightPosition * h, 2 * kStdWeightPosition * h, 1e-2, 2 * kStdWeightPosition * h,
      10 * kStdWeightVelocity * h, 10 * kStdWeightVelocity * h, 1e-5, 10 * kStdWeightVelocity * h;
  s.covariance = std.array().square().matrix().asDiagonal();
  return s;
}

KalmanState kf_predict(const KalmanState& state, const TrackerParams& params) {
  const double h = state.mean(3);
  Vector8 std;
  std << kStdWeightPosition * h, kStdWeightPosition * h, 1e-2, kStdWeightPosition * h,
      kStdWeightVelocity * h, kStdWeightVelocity * h, 1e-5, kStdWeightVelocity * h;
  const Matrix8 q = (params.process_noise_scale * std.array().square()).matrix().asDiagonal();
  static const Matrix8 f = transition();
  KalmanState out;
  out.mean = f * state.mean;
  out.covariance = symmetrize(f * state.covariance * f.transpose() + q);
  return out;
}

MeasurementDistribution kf_project(const KalmanState& state, const TrackerParams& params) {
  const double h = state.mean(3);
  Vector4 std;
  std << kStdWeightPosition * h, kStdWeightPosition * h, 1e-1, kStdWeightPosition * h;
  const Matrix4 r = (params.measurement_noise_scale * std.array().square()).matrix().asDiagonal();
  static const Eigen::Matrix<double, 4, 8> obs = observation();
  MeasurementDistribution m;
  m.mean = obs * state.mean;
  m.covariance = obs * state.covariance * obs.transpose() + r;
  m.covariance = 0.5 * (m.covariance + m.covariance.transpose());
  return m;
}

KalmanState kf_update(const KalmanState& state, const Vector4& measurement, const TrackerParams& params) {
  const MeasurementDistribution proj = kf_project(state, params);
  const Eigen::LLT<Matrix4> llt(proj.covariance);
  if (llt.info() != Eigen::Success) throw DegenerateCovariance("innovation covariance is not positive definite");

  static const Eigen::Matrix<double, 4, 8> obs = observation();
  // K = P H^T S^-1, solved as S K^T = H P.
  const Eigen::Matrix<double, 4, 8> hp = obs * state.covariance;
  const Eigen::Matrix<double, 8, 4> gain = llt.solve(hp).transpose();
  const Vector4 innovation = measurement - proj.mean;

  KalmanState out;
  out.mean = state.mean + gain * innovation;
  out.covariance = symmetrize(state.covariance - gain * proj.covariance * gain.transpose());
  return out;
}

double squared_mahalanobis(const Vector4& mean, const Matrix4& covariance, const Vector4& x) {
  const Eigen::LLT<Matrix4> llt(covariance);
  if (llt.info() != Eigen::Success) throw DegenerateCovariance("gating covariance is not positive definite");
  const Vector4 z = llt.matrixL().solve(x - mean);
  return z.squaredNorm();
}

GateResult gate(const MeasurementDistribution& innovation, const Vector4& measurement, double threshold) {
  const double d2 = squared_mahalanobis(innovation.mean, innovation.covariance, measurement);
  return {d2 <= threshold, d2};
}

GateResult gate(const KalmanState& state, const Vector4& measurement, const TrackerParams& params) {
  return gate(kf_project(state, params), measurement, params.gating_threshold);
}

}  // namespace wfollow::tracker
