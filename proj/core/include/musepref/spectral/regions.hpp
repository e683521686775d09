#pragma once

#include <string>
#include <vector>

namespace musepref::spectral {

enum class Region {
  HemisphereLeft,
  HemisphereRight,
  FrontalLeft,
  FrontalRight,
  FrontalLR,
  HemisphereLR,
};

struct RegionSpec {
  Region region;
  std::string name;                   // e.g. "Frontal_Right"
  std::string code;                   // report superscript: fr, hr, hl, fl, flr, hlr
  std::vector<std::string> channels;  // analysis order
};

// All six analysis regions in canonical order (lateral pairs, then unions).
const std::vector<RegionSpec>& all_regions();

// Accepts the canonical name ("Frontal_Right") or short code ("fr").
const RegionSpec& region_lookup(const std::string& name);
const RegionSpec& region_lookup(Region region);

}  // namespace musepref::spectral
