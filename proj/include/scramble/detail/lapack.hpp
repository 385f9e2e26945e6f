#pragma once

#include "scramble/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdlib>
#include <dlfcn.h>
#include <string>
#include <vector>

// Divide-and-conquer symmetric/Hermitian eigensolvers from a LAPACK shared
// library resolved at first use. Loading lazily lets us pin OpenBLAS to a
// kernel family before it initializes: the automatically detected Cooperlake
// kernels of OpenBLAS 0.3.20 return wrong eigenvectors.
//
// SCRAMBLE_LAPACK overrides the library path; OPENBLAS_CORETYPE set by the
// user is left alone.
#ifndef SCRAMBLE_DEFAULT_LAPACK
#define SCRAMBLE_DEFAULT_LAPACK "libopenblas.so.0"
#endif

namespace scramble::detail {

class LapackBackend {
  public:
    using dsyevd_fn = void(const char *, const char *, const int *, double *, const int *, double *, double *, const int *, int *,
                           const int *, int *, std::size_t, std::size_t);
    using zheevd_fn = void(const char *, const char *, const int *, std::complex<double> *, const int *, double *, std::complex<double> *,
                           const int *, double *, const int *, int *, const int *, int *, std::size_t, std::size_t);

    static const LapackBackend &instance() {
        static const LapackBackend backend;
        return backend;
    }

    dsyevd_fn  *dsyevd = nullptr;
    zheevd_fn  *zheevd = nullptr;
    std::string library;

  private:
    LapackBackend() {
        pin_openblas_kernels();
        std::vector<std::string> candidates;
        if(const char *env = std::getenv("SCRAMBLE_LAPACK")) candidates.emplace_back(env);
        candidates.emplace_back(SCRAMBLE_DEFAULT_LAPACK);
        candidates.emplace_back("libopenblas.so.0");
        candidates.emplace_back("liblapack.so.3");
        std::string tried;
        for(const auto &name : candidates) {
            void *h = dlopen(name.c_str(), RTLD_NOW | RTLD_LOCAL);
            if(h == nullptr) {
                tried += " " + name;
                continue;
            }
            dsyevd = reinterpret_cast<dsyevd_fn *>(dlsym(h, "dsyevd_"));
            zheevd = reinterpret_cast<zheevd_fn *>(dlsym(h, "zheevd_"));
            if(dsyevd != nullptr && zheevd != nullptr) {
                library = name;
                return;
            }
            tried += " " + name + "(no dsyevd_/zheevd_)";
        }
        throw std::runtime_error("no usable LAPACK library found; tried" + tried);
    }

    static void pin_openblas_kernels() {
        if(std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
        __builtin_cpu_init();
        const bool avx512 = __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512bw") &&
                            __builtin_cpu_supports("avx512dq") && __builtin_cpu_supports("avx512vl");
        if(avx512) setenv("OPENBLAS_CORETYPE", "SkylakeX", 0);
        else if(__builtin_cpu_supports("avx2")) setenv("OPENBLAS_CORETYPE", "Haswell", 0);
#endif
    }
};

inline void check_info(int info, const char *routine) {
    if(info != 0) throw std::runtime_error(std::string(routine) + " failed with info = " + std::to_string(info));
}

/// Residuals of a few eigenpairs; catches a miscomputing backend at O(n^2) cost.
template<class Matrix>
void spot_check(const Matrix &original, const Matrix &vectors, const Eigen::VectorXd &w) {
    const Eigen::Index n = original.rows();
    if(n == 0) return;
    const double scale = std::max(1.0, original.cwiseAbs().maxCoeff());
    for(Eigen::Index k : {Eigen::Index{0}, n / 2, n - 1}) {
        const auto   v     = vectors.col(k);
        const double resid = (original * v - w(k) * v).cwiseAbs().maxCoeff();
        const double norm  = std::abs(v.norm() - 1.0);
        if(!(resid <= 1e-9 * scale * std::sqrt(static_cast<double>(n))) || !(norm <= 1e-10))
            throw ValidationError("eigensolver returned an inaccurate eigenpair (residual " + std::to_string(resid) + ")");
    }
}

/// On return `a` holds the eigenvectors (if requested) and `w` ascending eigenvalues.
inline void syevd(Eigen::MatrixXd &a, Eigen::VectorXd &w, bool vectors) {
    const int n = static_cast<int>(a.rows());
    w.resize(n);
    if(n == 0) return;
    const auto           &be   = LapackBackend::instance();
    const char            jobz = vectors ? 'V' : 'N', uplo = 'U';
    const Eigen::MatrixXd original = vectors ? a : Eigen::MatrixXd();
    int                   info = 0, lwork = -1, liwork = -1, iwq = 0;
    double                wq   = 0;
    be.dsyevd(&jobz, &uplo, &n, a.data(), &n, w.data(), &wq, &lwork, &iwq, &liwork, &info, 1, 1);
    check_info(info, "dsyevd");
    lwork  = static_cast<int>(wq);
    liwork = iwq;
    std::vector<double> work(static_cast<std::size_t>(lwork));
    std::vector<int>    iwork(static_cast<std::size_t>(liwork));
    be.dsyevd(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, iwork.data(), &liwork, &info, 1, 1);
    check_info(info, "dsyevd");
    if(vectors) spot_check(original, a, w);
}

inline void heevd(Eigen::MatrixXcd &a, Eigen::VectorXd &w, bool vectors) {
    const int n = static_cast<int>(a.rows());
    w.resize(n);
    if(n == 0) return;
    const auto            &be   = LapackBackend::instance();
    const char             jobz = vectors ? 'V' : 'N', uplo = 'U';
    const Eigen::MatrixXcd original = vectors ? a : Eigen::MatrixXcd();
    int                    info = 0, lwork = -1, lrwork = -1, liwork = -1, iwq = 0;
    std::complex<double>   wq   = 0;
    double                 rwq  = 0;
    be.zheevd(&jobz, &uplo, &n, a.data(), &n, w.data(), &wq, &lwork, &rwq, &lrwork, &iwq, &liwork, &info, 1, 1);
    check_info(info, "zheevd");
    lwork  = static_cast<int>(wq.real());
    lrwork = static_cast<int>(rwq);
    liwork = iwq;
    std::vector<std::complex<double>> work(static_cast<std::size_t>(lwork));
    std::vector<double>               rwork(static_cast<std::size_t>(lrwork));
    std::vector<int>                  iwork(static_cast<std::size_t>(liwork));
    be.zheevd(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, rwork.data(), &lrwork, iwork.data(), &liwork, &info, 1, 1);
    check_info(info, "zheevd");
    if(vectors) spot_check(original, a, w);
}

} // namespace scramble::detail
