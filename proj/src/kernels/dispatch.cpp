#include <cstdlib>
#include <cstring>

#include "tcg/kernels.hpp"

namespace tcg::kernels {

namespace {

using DotFn = double (*)(std::span<const double>, std::span<const double>) noexcept;

bool env_forces_scalar() noexcept {
  const char* v = std::getenv("TCG_ISA");
  return v && std::strcmp(v, "scalar") == 0;
}

DotFn resolve(Isa isa) noexcept {
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2: return &dot_avx2;
#endif
#if defined(__aarch64__)
    case Isa::Neon: return &dot_neon;
#endif
    default: return &dot_scalar;
  }
}

struct Dispatch {
  Isa isa;
  DotFn fn;
  Dispatch() : isa(detect_isa()), fn(resolve(isa)) {}
};

const Dispatch& dispatch() noexcept {
  static const Dispatch d;
  return d;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "scalar";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa detect_isa() noexcept {
  if (env_forces_scalar()) return Isa::Scalar;
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  if (isa_available(Isa::Neon)) return Isa::Neon;
  return Isa::Scalar;
}

Isa active_isa() noexcept { return dispatch().isa; }

double dot(std::span<const double> a, std::span<const double> b) noexcept { return dispatch().fn(a, b); }

double dot(Isa isa, std::span<const double> a, std::span<const double> b) noexcept {
  return isa_available(isa) ? resolve(isa)(a, b) : dot_scalar(a, b);
}

void dot_rows(std::span<const double> rows, std::span<const double> query, std::span<double> out) noexcept {
  const std::size_t dim = query.size();
  const DotFn fn = dispatch().fn;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(rows.subspan(i * dim, dim), query);
}

}  // namespace tcg::kernels
