#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbffd {

/// Point/vector in up to three dimensions. 2D and 1D sets leave the
/// trailing components at zero, so distance code is dimension-agnostic.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double dist2(Vec3 a, Vec3 b) { return dot(a - b, a - b); }
inline double dist(Vec3 a, Vec3 b) { return std::sqrt(dist2(a, b)); }

/// Classification of a node or evaluation point against the PDE regions.
enum class PointClass : std::uint8_t { Interior, Dirichlet, Neumann, Ghost };

inline const char* class_tag(PointClass c) {
    switch (c) {
        case PointClass::Interior: return "I";
        case PointClass::Dirichlet: return "D";
        case PointClass::Neumann: return "N";
        case PointClass::Ghost: return "G";
    }
    return "?";
}

PointClass class_from_tag(const std::string& tag);

/// Error with a pipeline stage label, so the CLI can report where a run died.
class StageError : public std::runtime_error {
  public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error("[" + stage + "] " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

  private:
    std::string stage_;
};

/// Counter-based PRNG (splitmix64). The standard distributions are
/// implementation-defined, so node generation rolls its own uniforms to keep
/// node sets bit-identical for a fixed seed across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [a, b).
    double uniform(double a, double b) { return a + (b - a) * next_double(); }

  private:
    std::uint64_t state_;
};

/// Deterministic sub-stream derivation for independent generation phases.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
    return r.next_u64();
}

}  // namespace rbffd
