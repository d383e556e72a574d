#pragma once

#include <stdexcept>
#include <string>

namespace shockspec {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SHOCKSPEC_DEFINE_ERROR(Name)                         \
  struct Name : Error {                                      \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

SHOCKSPEC_DEFINE_ERROR(EvaluatorDomain);
SHOCKSPEC_DEFINE_ERROR(NonParabolic);
SHOCKSPEC_DEFINE_ERROR(DegenerateShock);
SHOCKSPEC_DEFINE_ERROR(EqualEndstates);
SHOCKSPEC_DEFINE_ERROR(RHViolated);
SHOCKSPEC_DEFINE_ERROR(NoConnection);
SHOCKSPEC_DEFINE_ERROR(DimensionMismatch);
SHOCKSPEC_DEFINE_ERROR(SingularAstar);
SHOCKSPEC_DEFINE_ERROR(SplittingLost);
SHOCKSPEC_DEFINE_ERROR(StiffnessOverflow);
SHOCKSPEC_DEFINE_ERROR(InconclusiveFit);
SHOCKSPEC_DEFINE_ERROR(ContourTooClose);
SHOCKSPEC_DEFINE_ERROR(ConditionDViolated);
SHOCKSPEC_DEFINE_ERROR(NearSpectrum);
SHOCKSPEC_DEFINE_ERROR(TruncationTooSmall);
SHOCKSPEC_DEFINE_ERROR(ConjugationDiverged);
SHOCKSPEC_DEFINE_ERROR(ExtrapolationUnstable);
SHOCKSPEC_DEFINE_ERROR(GlancingUnresolved);
SHOCKSPEC_DEFINE_ERROR(NoGlancing);
SHOCKSPEC_DEFINE_ERROR(CFLViolation);
SHOCKSPEC_DEFINE_ERROR(BlowupDetected);
SHOCKSPEC_DEFINE_ERROR(WindowTooShort);
SHOCKSPEC_DEFINE_ERROR(ParseError);
SHOCKSPEC_DEFINE_ERROR(ValidationError);
SHOCKSPEC_DEFINE_ERROR(MissingArtifacts);

#undef SHOCKSPEC_DEFINE_ERROR

}  // namespace shockspec
