// evolution.hpp
// Glue between the typed model right-hand sides and the flat integrator state.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wavemodels/curve_models.hpp"
#include "wavemodels/error.hpp"
#include "wavemodels/graph_models.hpp"
#include "wavemodels/model_id.hpp"
#include "wavemodels/spectral.hpp"
#include "wavemodels/timestep.hpp"

namespace wavemodels {

/// Number of grid fields in the model's state, in packing order.
inline std::size_t field_count(ModelId id) {
  switch (state_kind(id)) {
    case StateKind::elevation_velocity: return 2;
    case StateKind::profile: return 1;
    case StateKind::elevation_vorticity: return 2;
    case StateKind::curve: return 3;
  }
  return 0;
}

/// Column names of the packed fields.
inline std::vector<std::string> field_names(ModelId id) {
  switch (state_kind(id)) {
    case StateKind::elevation_velocity: return {"h", "v"};
    case StateKind::profile: return {"f"};
    case StateKind::elevation_vorticity: return {"h", "w"};
    case StateKind::curve: return {"z1", "z2", "w"};
  }
  return {};
}

inline State pack(const std::vector<SpectralField>& fields) {
  State y;
  for (const auto& f : fields) y.insert(y.end(), f.values().begin(), f.values().end());
  return y;
}

inline std::vector<SpectralField> unpack(const State& y, const PeriodicGrid& grid, std::size_t count) {
  const std::size_t n = grid.size();
  if (y.size() != n * count) throw UsageError("state size does not match grid and field count");
  std::vector<SpectralField> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.emplace_back(grid, std::vector<double>(y.begin() + static_cast<std::ptrdiff_t>(i * n),
                                               y.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
  }
  return out;
}

inline CurveState curve_from_state(const State& y, const PeriodicGrid& grid) {
  auto f = unpack(y, grid, 3);
  return {std::move(f[0]), std::move(f[1]), std::move(f[2])};
}

/// Flat right-hand side for a model. Curve models other than the z-model keep w frozen.
inline Rhs make_rhs(ModelId id, const PeriodicGrid& grid, const ModelParams& p) {
  p.validate();
  const std::size_t count = field_count(id);
  return [id, grid, p, count](double, const State& y) -> State {
    auto f = unpack(y, grid, count);
    switch (id) {
      case ModelId::viscous_bi: {
        auto d = rhs_viscous(GraphState{f[0], f[1]}, p);
        return pack({d.h, d.v});
      }
      case ModelId::viscous_uni:
        return pack({rhs_viscous(WaveProfile{f[0]}, p, ViscousUniForm::reduced).f});
      case ModelId::viscous_uni_full:
        return pack({rhs_viscous(WaveProfile{f[0]}, p, ViscousUniForm::full).f});
      case ModelId::odd_bi: {
        auto d = rhs_odd(GraphState{f[0], f[1]}, p);
        return pack({d.h, d.v});
      }
      case ModelId::odd_uni:
        return pack({rhs_odd(WaveProfile{f[0]}, p).f});
      case ModelId::inviscid_bi: {
        auto d = rhs_inviscid(GraphState{f[0], f[1]}, p);
        return pack({d.h, d.v});
      }
      case ModelId::inviscid_uni:
        return pack({rhs_inviscid(WaveProfile{f[0]}, p).f});
      case ModelId::internal_bi: {
        auto d = rhs_internal(GraphState{f[0], f[1]}, p);
        return pack({d.h, d.v});
      }
      case ModelId::internal_uni:
        return pack({rhs_internal(WaveProfile{f[0]}, p).f});
      case ModelId::internal_sys: {
        auto d = rhs_internal(ElevationVorticity{f[0], f[1]}, p);
        return pack({d.h, d.w});
      }
      case ModelId::zmodel: {
        auto d = zmodel_rhs(CurveState{f[0], f[1], f[2]}, p);
        return pack({d.z1, d.z2, d.w});
      }
      case ModelId::kh: {
        auto d = kh_rhs(CurveState{f[0], f[1], f[2]}, f[2]);
        return pack({d.x, d.y, SpectralField(grid)});
      }
      case ModelId::kh_refined: {
        auto d = refined_kh_rhs(CurveState{f[0], f[1], f[2]}, f[2]);
        return pack({d.x, d.y, SpectralField(grid)});
      }
      case ModelId::br_reference: {
        auto d = br_velocity(CurveState{f[0], f[1], f[2]}, f[2]);
        return pack({d.x, d.y, SpectralField(grid)});
      }
    }
    throw UsageError("unknown model");
  };
}

/// Krasny filter: every field entering `rhs` has its nonzero modes with |coefficient| < level zeroed.
/// Keeps roundoff from seeding short-wave growth in ill-posed sheet problems. level <= 0 returns rhs unchanged.
inline Rhs with_krasny_filter(Rhs rhs, const PeriodicGrid& grid, std::size_t count, double level) {
  if (!(level > 0.0)) return rhs;
  return [rhs = std::move(rhs), grid, count, level](double t, const State& y) {
    auto fields = unpack(y, grid, count);
    for (auto& f : fields) {
      Spectrum sp = f.spectrum();
      for (std::size_t k = 1; k < sp.size(); ++k) {
        if (std::abs(sp[k]) < level) sp[k] = 0.0;
      }
      f = SpectralField::from_spectrum(sp);
    }
    return rhs(t, pack(fields));
  };
}

}  // namespace wavemodels
