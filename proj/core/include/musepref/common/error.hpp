#pragma once

#include <stdexcept>
#include <string>

namespace musepref {

// Base class for all domain errors raised by the toolkit. The CLI maps these
// to exit code 1; anything else escaping a stage is a bug.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string module, std::string code, const std::string& what)
      : std::runtime_error(module + "/" + code + ": " + what),
        module_(std::move(module)),
        code_(std::move(code)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& code() const noexcept { return code_; }

 private:
  std::string module_;
  std::string code_;
};

#define MUSEPREF_DEFINE_ERROR(Name, Module)                      \
  class Name : public DomainError {                              \
   public:                                                       \
    explicit Name(const std::string& what)                       \
        : DomainError(Module, #Name, what) {}                    \
  }

// corpus
MUSEPREF_DEFINE_ERROR(MissingFile, "corpus");
MUSEPREF_DEFINE_ERROR(ChannelMismatch, "corpus");
MUSEPREF_DEFINE_ERROR(MalformedManifest, "corpus");
MUSEPREF_DEFINE_ERROR(NonPositiveTime, "corpus");

// dsp
MUSEPREF_DEFINE_ERROR(InvalidCutoff, "dsp");
MUSEPREF_DEFINE_ERROR(SignalTooShort, "dsp");
MUSEPREF_DEFINE_ERROR(NotConverged, "dsp");
MUSEPREF_DEFINE_ERROR(RankDeficient, "dsp");

// spectral
MUSEPREF_DEFINE_ERROR(BandOutsideGrid, "spectral");
MUSEPREF_DEFINE_ERROR(ZeroPower, "spectral");
MUSEPREF_DEFINE_ERROR(UnknownRegion, "spectral");

// stats
MUSEPREF_DEFINE_ERROR(EmptySample, "stats");
MUSEPREF_DEFINE_ERROR(LengthMismatch, "stats");

// learn
MUSEPREF_DEFINE_ERROR(DegenerateData, "learn");
MUSEPREF_DEFINE_ERROR(KTooLarge, "learn");

// modelsel
MUSEPREF_DEFINE_ERROR(MissingFeatures, "modelsel");
MUSEPREF_DEFINE_ERROR(ClassTooSmall, "modelsel");

#undef MUSEPREF_DEFINE_ERROR

}  // namespace musepref
