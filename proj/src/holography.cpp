#include "cayley/holography.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "cayley/error.hpp"
#include "cayley/parallel.hpp"

namespace cayley {

namespace {

constexpr std::size_t kRowsPerChunk = 8;

void check_plane(const SlmPlane& p) {
  if (p.width <= 0 || p.height <= 0) throw Error(ErrorCode::InvalidArgument, "SLM grid must be non-empty");
  if (!(p.pitch > 0) || !(p.focal_length > 0) || !(p.wavelength > 0)) {
    throw Error(ErrorCode::InvalidArgument, "pitch, focal length and wavelength must be positive");
  }
}

double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0) w += kTwoPi;
  return w >= kTwoPi ? 0.0 : w;
}

// exp(-i T) = row_j(X) * col_j(Y).
struct SeparableKernel {
  std::size_t targets;
  std::vector<cplx> row;  // [target][width]
  std::vector<cplx> col;  // [target][height]

  SeparableKernel(std::span<const Vec3> sites, const SlmPlane& p) : targets(sites.size()) {
    row.resize(targets * p.width);
    col.resize(targets * p.height);
    const double fl = p.focal_length * p.wavelength;
    const double ffl = p.focal_length * fl;
    for (std::size_t j = 0; j < targets; ++j) {
      const Vec3 s = sites[j];
      for (int i = 0; i < p.width; ++i) {
        const double X = p.x_of(i);
        row[j * p.width + i] = std::polar(1.0, -(kTwoPi * s.x * X / fl + kPi * s.z * X * X / ffl));
      }
      for (int k = 0; k < p.height; ++k) {
        const double Y = p.y_of(k);
        col[j * p.height + k] = std::polar(1.0, -(kTwoPi * s.y * Y / fl + kPi * s.z * Y * Y / ffl));
      }
    }
  }
};

std::vector<cplx> forward(std::span<const cplx> field, const SeparableKernel& K, const SlmPlane& p) {
  const std::size_t rows = p.height, m = K.targets;
  std::vector<std::vector<cplx>> parts(parallel::num_chunks(rows, kRowsPerChunk));
  parallel::for_chunks(rows, [&](std::size_t b, std::size_t e) {
    std::vector<cplx> acc(m, cplx{0});
    for (std::size_t k = b; k < e; ++k) {
      const cplx* line = field.data() + k * p.width;
      for (std::size_t j = 0; j < m; ++j) {
        const cplx* r = K.row.data() + j * p.width;
        cplx s = 0;
        for (int i = 0; i < p.width; ++i) s += line[i] * r[i];
        acc[j] += s * K.col[j * p.height + k];
      }
    }
    parts[b / kRowsPerChunk] = std::move(acc);
  }, kRowsPerChunk);
  std::vector<cplx> total(m, cplx{0});
  for (const auto& part : parts) {
    for (std::size_t j = 0; j < m; ++j) total[j] += part[j];
  }
  return total;
}

void check_targets(const TargetSet& t) {
  if (t.sites.empty()) throw Error(ErrorCode::InvalidArgument, "no holography targets");
  if (!t.weights.empty() && t.weights.size() != t.sites.size()) {
    throw Error(ErrorCode::DimensionMismatch, "one weight per target required");
  }
  for (double w : t.weights) {
    if (!(w > 0)) throw Error(ErrorCode::InvalidArgument, "target weights must be positive");
  }
  for (std::size_t a = 0; a < t.sites.size(); ++a) {
    for (std::size_t b = a + 1; b < t.sites.size(); ++b) {
      if (distance(t.sites[a], t.sites[b]) <= 1e-9) {
        throw Error(ErrorCode::DegenerateTargets,
                    "targets " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
      }
    }
  }
}

}  // namespace

double transfer_kernel(Vec3 site, double X, double Y, double focal_length, double wavelength) {
  return kTwoPi * (site.x * X + site.y * Y) / (focal_length * wavelength) +
         kPi * site.z * (X * X + Y * Y) / (focal_length * focal_length * wavelength);
}

std::vector<cplx> reconstruct_field(std::span<const double> phase, std::span<const Vec3> points,
                                    const SlmPlane& plane) {
  check_plane(plane);
  if (phase.size() != plane.pixels()) throw Error(ErrorCode::DimensionMismatch, "phase grid size mismatch");
  std::vector<cplx> out;
  out.reserve(points.size());
  for (const Vec3& pt : points) {
    out.push_back(parallel::sum_chunks(static_cast<std::size_t>(plane.height), cplx{0},
                                       [&](std::size_t b, std::size_t e) {
      cplx acc = 0;
      for (std::size_t k = b; k < e; ++k) {
        const double Y = plane.y_of(static_cast<int>(k));
        for (int i = 0; i < plane.width; ++i) {
          const double arg = phase[k * plane.width + i] -
                             transfer_kernel(pt, plane.x_of(i), Y, plane.focal_length, plane.wavelength);
          acc += cplx{std::cos(arg), std::sin(arg)};
        }
      }
      return acc;
    }, kRowsPerChunk));
  }
  return out;
}

double uniformity(std::span<const double> intensities) {
  if (intensities.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(intensities.begin(), intensities.end());
  if (*hi + *lo == 0) return 1.0;
  return 1.0 - (*hi - *lo) / (*hi + *lo);
}

WgsResult wgs_optimize(const TargetSet& targets, const SlmPlane& plane, int iterations,
                       std::uint64_t seed) {
  check_plane(plane);
  check_targets(targets);
  if (iterations < 1) throw Error(ErrorCode::InvalidArgument, "need at least one iteration");
  const std::size_t m = targets.sites.size();
  const SeparableKernel K(targets.sites, plane);

  WgsResult r;
  r.phase.resize(plane.pixels());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, kTwoPi);
  for (auto& phi : r.phase) phi = uni(rng);
  r.weights = targets.weights.empty() ? std::vector<double>(m, 1.0) : targets.weights;

  const auto normalise = [&] {
    double s = 0;
    for (double w : r.weights) s += w;
    for (double& w : r.weights) w /= s;
  };
  normalise();

  std::vector<cplx> field(plane.pixels());
  const auto field_of_phase = [&] {
    for (std::size_t p = 0; p < field.size(); ++p) field[p] = std::polar(1.0, r.phase[p]);
  };
  field_of_phase();
  std::vector<cplx> E = forward(field, K, plane);

  for (int it = 0; it < iterations; ++it) {
    std::vector<double> amp(m);
    double mean = 0;
    for (std::size_t j = 0; j < m; ++j) {
      amp[j] = std::abs(E[j]);
      mean += amp[j] / static_cast<double>(m);
    }
    std::vector<cplx> coef(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (amp[j] > 0) r.weights[j] *= mean / amp[j];
    }
    normalise();
    for (std::size_t j = 0; j < m; ++j) {
      coef[j] = amp[j] > 0 ? r.weights[j] * E[j] / amp[j] : cplx{r.weights[j]};
    }

    parallel::for_chunks(static_cast<std::size_t>(plane.height), [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        for (int i = 0; i < plane.width; ++i) {
          cplx s = 0;
          for (std::size_t j = 0; j < m; ++j) {
            s += coef[j] * std::conj(K.row[j * plane.width + i] * K.col[j * plane.height + k]);
          }
          r.phase[k * plane.width + i] = wrap_phase(std::arg(s));
        }
      }
    }, kRowsPerChunk);

    field_of_phase();
    E = forward(field, K, plane);
    std::vector<double> intensity(m);
    for (std::size_t j = 0; j < m; ++j) intensity[j] = std::norm(E[j]);
    r.uniformity.push_back(uniformity(intensity));
    r.intensity_history.push_back(std::move(intensity));
  }
  r.intensities = r.intensity_history.back();
  return r;
}

void write_phase(std::ostream& os, std::span<const double> phase, int width, int height) {
  if (phase.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::DimensionMismatch, "phase grid size mismatch");
  }
  os << width << ' ' << height << '\n';
  for (double v : phase) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    os.write(buf, 8);
  }
  if (!os) throw Error(ErrorCode::Io, "failed to write phase pattern");
}

PhasePattern read_phase(std::istream& is, int& width, int& height) {
  std::string header;
  if (!std::getline(is, header)) throw Error(ErrorCode::Io, "missing phase header");
  if (std::sscanf(header.c_str(), "%d %d", &width, &height) != 2 || width <= 0 || height <= 0) {
    throw Error(ErrorCode::Io, "malformed phase header");
  }
  PhasePattern phase(static_cast<std::size_t>(width) * height);
  for (double& v : phase) {
    char buf[8];
    if (!is.read(buf, 8)) throw Error(ErrorCode::Io, "truncated phase data");
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    v = std::bit_cast<double>(bits);
  }
  return phase;
}

}  // namespace cayley
