#ifndef METROKIT_ERRORS_HPP
#define METROKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace metrokit {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// operators
struct NonHermitianInput : Error { using Error::Error; };
struct SizeTooSmall : Error { using Error::Error; };
struct SizeTooLarge : Error { using Error::Error; };
struct OddSizeNonLocal : Error { using Error::Error; };
struct InhomogeneousGap : Error { using Error::Error; };
struct AsymmetricSpectrum : Error { using Error::Error; };

// su2
struct ConditionViolation : Error { using Error::Error; };
struct NegativePartialSum : Error { using Error::Error; };
struct MixedStructureConstants : Error { using Error::Error; };
struct Su2ViolationDetected : Error { using Error::Error; };

// states
struct AnnihilatedState : Error { using Error::Error; };
struct UnknownBasis : Error { using Error::Error; };
struct KOutOfRange : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// channels
struct SizeTooLargeForExplicitKraus : Error { using Error::Error; };
struct IncompleteKrausSet : Error { using Error::Error; };
struct InvalidChannelParameter : Error { using Error::Error; };

// qfi
struct MixedInput : Error { using Error::Error; };
struct NonHermitianDerivative : Error { using Error::Error; };
struct NonCommutingNoise : Error { using Error::Error; };

// bounds
struct UnsupportedRemixGenerator : Error { using Error::Error; };
struct InvalidQ : Error { using Error::Error; };

// experiments
struct NonPositiveTime : Error { using Error::Error; };
struct FlatObjective : Error { using Error::Error; };
struct AnnihilatedAtStart : Error { using Error::Error; };

// cli
struct CaseUnknown : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };

} // namespace metrokit

#endif
