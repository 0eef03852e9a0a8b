#pragma once

#include <span>
#include <string_view>

// Dense vector kernels behind the exact-scan vector index. Every kernel has
// a scalar reference; wider variants are picked at runtime and must agree
// with it to within floating-point reassociation error.
namespace tcg::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

// Best variant this CPU supports. TCG_ISA=scalar in the environment pins
// the scalar path.
Isa detect_isa() noexcept;
Isa active_isa() noexcept;
bool isa_available(Isa isa) noexcept;

double dot_scalar(std::span<const double> a, std::span<const double> b) noexcept;
#if defined(__x86_64__) || defined(_M_X64)
double dot_avx2(std::span<const double> a, std::span<const double> b) noexcept;
#endif
#if defined(__aarch64__)
double dot_neon(std::span<const double> a, std::span<const double> b) noexcept;
#endif

// Dispatched. Sizes must match; the shorter length is used otherwise.
double dot(std::span<const double> a, std::span<const double> b) noexcept;
double dot(Isa isa, std::span<const double> a, std::span<const double> b) noexcept;

// out[i] = dot(rows[i*dim .. (i+1)*dim), query)
void dot_rows(std::span<const double> rows, std::span<const double> query, std::span<double> out) noexcept;

}  // namespace tcg::kernels
