#include "musepref/spectral/regions.hpp"

#include "musepref/common/error.hpp"

namespace musepref::spectral {

namespace {

std::vector<RegionSpec> build_regions() {
  const std::vector<std::string> hemisphere_left = {
      "Fp1", "AF3", "AF5", "AF7", "F1",  "F3",  "F5",  "F7",  "FT7",
      "FC1", "FC3", "FC5", "T7",  "C1",  "C3",  "C5",  "TP7", "CP1",
      "CP3", "CP5", "P1",  "P3",  "P5",  "P7",  "PO3", "PO7", "O1"};
  const std::vector<std::string> hemisphere_right = {
      "Fp2", "AF4", "AF6", "AF8", "F2",  "F4",  "F6",  "F8",  "FT8",
      "FC2", "FC4", "FC6", "T8",  "C2",  "C4",  "C6",  "TP8", "CP2",
      "CP4", "CP6", "P2",  "P4",  "P6",  "P8",  "PO4", "PO8", "O2"};
  const std::vector<std::string> frontal_left = {
      "Fp1", "AF3", "AF7", "F1", "F3", "F5", "F7", "FT7", "FC1", "FC3", "FC5"};
  const std::vector<std::string> frontal_right = {
      "Fp2", "AF4", "AF8", "F2", "F4", "F6", "F8", "FT8", "FC2", "FC4", "FC6"};

  auto concat = [](const std::vector<std::string>& a,
                   const std::vector<std::string>& b) {
    std::vector<std::string> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  };

  return {
      {Region::HemisphereLeft, "Hemisphere_Left", "hl", hemisphere_left},
      {Region::HemisphereRight, "Hemisphere_Right", "hr", hemisphere_right},
      {Region::FrontalLeft, "Frontal_Left", "fl", frontal_left},
      {Region::FrontalRight, "Frontal_Right", "fr", frontal_right},
      {Region::FrontalLR, "Frontal_LR", "flr", concat(frontal_left, frontal_right)},
      {Region::HemisphereLR, "Hemisphere_LR", "hlr",
       concat(hemisphere_left, hemisphere_right)},
  };
}

}  // namespace

const std::vector<RegionSpec>& all_regions() {
  static const std::vector<RegionSpec> regions = build_regions();
  return regions;
}

const RegionSpec& region_lookup(const std::string& name) {
  for (const auto& r : all_regions())
    if (r.name == name || r.code == name) return r;
  throw UnknownRegion("no region named '" + name + "'");
}

const RegionSpec& region_lookup(Region region) {
  for (const auto& r : all_regions())
    if (r.region == region) return r;
  throw UnknownRegion("bad region enum");
}

}  // namespace musepref::spectral
