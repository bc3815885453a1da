#pragma once

#include <stdexcept>
#include <string>

namespace rta {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfRangeError : Error { using Error::Error; };
struct InvalidParamError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

struct UnknownWordError : Error { using Error::Error; };
struct UnknownItemError : Error { using Error::Error; };
struct UnknownUserError : Error { using Error::Error; };
struct UnknownRecipeError : Error { using Error::Error; };

struct EmptyCatalogError : Error { using Error::Error; };
struct EmptyHistoryError : Error { using Error::Error; };
struct EmptySampleError : Error { using Error::Error; };
struct EmptyTitleError : Error { using Error::Error; };

struct InstanceTooLargeError : Error { using Error::Error; };
struct MismatchedRunsError : Error { using Error::Error; };

struct TimeoutError : Error { using Error::Error; };
struct ProtocolError : Error { using Error::Error; };
struct RemoteError : Error { using Error::Error; };
struct EmptyResponseError : Error { using Error::Error; };

}  // namespace rta
