// Copyright 2026 The factpipe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FACTPIPE_COMMON_ERROR_H_
#define FACTPIPE_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace factpipe {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor shapes that do not fit an operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A page, line, parameter or file that does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Malformed input data (bad records, bad checkpoint files, bad config).
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace factpipe

#endif  // FACTPIPE_COMMON_ERROR_H_
