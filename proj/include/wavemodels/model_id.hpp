// model_id.hpp
// Identifiers for every evolution model and the state layout each one uses.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace wavemodels {

enum class ModelId {
  viscous_bi,
  viscous_uni,
  viscous_uni_full,
  odd_bi,
  odd_uni,
  inviscid_bi,
  inviscid_uni,
  internal_bi,
  internal_uni,
  internal_sys,
  zmodel,
  kh,
  kh_refined,
  br_reference,
};

/// How the flat integrator state is laid out for a model.
enum class StateKind {
  elevation_velocity,  // (h, v = h_t)
  profile,             // f
  elevation_vorticity, // (h, w)
  curve,               // (z1, z2, w)
};

enum class ModelFamily { viscous, odd, inviscid, internal, curve };

struct ModelInfo {
  ModelId id;
  std::string_view name;
  StateKind state;
  ModelFamily family;
};

inline constexpr std::array<ModelInfo, 14> kModels{{
    {ModelId::viscous_bi, "viscous-bi", StateKind::elevation_velocity, ModelFamily::viscous},
    {ModelId::viscous_uni, "viscous-uni", StateKind::profile, ModelFamily::viscous},
    {ModelId::viscous_uni_full, "viscous-uni-full", StateKind::profile, ModelFamily::viscous},
    {ModelId::odd_bi, "odd-bi", StateKind::elevation_velocity, ModelFamily::odd},
    {ModelId::odd_uni, "odd-uni", StateKind::profile, ModelFamily::odd},
    {ModelId::inviscid_bi, "inviscid-bi", StateKind::elevation_velocity, ModelFamily::inviscid},
    {ModelId::inviscid_uni, "inviscid-uni", StateKind::profile, ModelFamily::inviscid},
    {ModelId::internal_bi, "internal-bi", StateKind::elevation_velocity, ModelFamily::internal},
    {ModelId::internal_uni, "internal-uni", StateKind::profile, ModelFamily::internal},
    {ModelId::internal_sys, "internal-sys", StateKind::elevation_vorticity, ModelFamily::internal},
    {ModelId::zmodel, "zmodel", StateKind::curve, ModelFamily::curve},
    {ModelId::kh, "kh", StateKind::curve, ModelFamily::curve},
    {ModelId::kh_refined, "kh-refined", StateKind::curve, ModelFamily::curve},
    {ModelId::br_reference, "br-reference", StateKind::curve, ModelFamily::curve},
}};

inline const ModelInfo& model_info(ModelId id) {
  for (const auto& m : kModels) {
    if (m.id == id) return m;
  }
  return kModels.front();  // unreachable for valid enumerators
}

inline std::string to_string(ModelId id) { return std::string(model_info(id).name); }

inline std::optional<ModelId> parse_model_id(std::string_view name) {
  for (const auto& m : kModels) {
    if (m.name == name) return m.id;
  }
  return std::nullopt;
}

inline StateKind state_kind(ModelId id) { return model_info(id).state; }

inline bool is_curve_model(ModelId id) { return state_kind(id) == StateKind::curve; }

}  // namespace wavemodels
