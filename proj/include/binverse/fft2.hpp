#ifndef BINVERSE_FFT2_HPP
#define BINVERSE_FFT2_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

namespace binverse {

// Two-dimensional transforms composed from 1-D FFTs, one workspace per
// chain/thread (the plan cache inside Eigen::FFT is not shareable).
//
// Conventions (D = unit square, x_i = i/N):
//   forward:  A_k  = sum_x a(x) e^{-2*pi*i k.x}          (plain DFT sum)
//   inverse:  a(x) = (1/N^2) sum_k A_k e^{+2*pi*i k.x}
// Analysis coefficients of the trigonometric interpolant are forward/N^2;
// synthesis from such coefficients is inverse*N^2.
class Fft2 {
 public:
  void forward(Eigen::MatrixXcd& a);
  void inverse(Eigen::MatrixXcd& a);

 private:
  void transform(Eigen::MatrixXcd& a, bool inv);

  Eigen::FFT<double> fft_;
  Eigen::VectorXcd in_, out_;
};

// FFT bin for a signed wavevector component, k in {-N/2, ..., N/2-1}.
inline int fft_bin(int k, int N) { return (k % N + N) % N; }

// Signed wavevector component for an FFT bin, result in {-N/2, ..., N/2-1}.
inline int signed_wavenumber(int bin, int N) {
  return bin < N / 2 ? bin : bin - N;
}

}  // namespace binverse

#endif
