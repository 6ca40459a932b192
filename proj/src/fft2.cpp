#include "binverse/fft2.hpp"

namespace binverse {

void Fft2::forward(Eigen::MatrixXcd& a) { transform(a, false); }

void Fft2::inverse(Eigen::MatrixXcd& a) { transform(a, true); }

void Fft2::transform(Eigen::MatrixXcd& a, bool inv) {
  const Eigen::Index n = a.rows();
  in_.resize(n);
  out_.resize(n);
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    in_ = a.col(j);
    if (inv)
      fft_.inv(out_, in_);
    else
      fft_.fwd(out_, in_);
    a.col(j) = out_;
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    in_ = a.row(i).transpose();
    if (inv)
      fft_.inv(out_, in_);
    else
      fft_.fwd(out_, in_);
    a.row(i) = out_.transpose();
  }
}

}  // namespace binverse
