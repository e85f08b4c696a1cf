/*
 * Copyright 2026 The lexsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexsim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input bytes are not valid UTF-8.
class EncodingError : public Error {
public:
    EncodingError(const std::string &what, std::size_t byte_offset)
        : Error(what), byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

/// Malformed file contents (model, dataset, cascade config).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Invalid argument or configuration value.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// No word survived the frequency threshold.
class EmptyVocabularyError : public Error {
public:
    EmptyVocabularyError() : Error("empty vocabulary") {}
    using Error::Error;
};

/// A ranking metric is undefined for the given input.
class MetricError : public Error {
public:
    using Error::Error;
};

/// Query for a word that the model does not contain.
class UnknownWordError : public Error {
public:
    explicit UnknownWordError(const std::string &word)
        : Error("word not in vocabulary: " + word), word_(word) {}

    const std::string &word() const noexcept { return word_; }

private:
    std::string word_;
};

}  // namespace lexsim
