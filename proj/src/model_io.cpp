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

// Interchange format shared with the classic word2vec tool:
//
//   "V D\n" header in ASCII, then V records.
//   text:   "word v1 v2 ... vD\n"
//   binary: word bytes, 0x20, D little-endian float32 (a 0x0A between
//           records is accepted on read, never written).

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include "lexsim/error.hpp"
#include "lexsim/model.hpp"
#include "lexsim/utf8.hpp"

namespace lexsim {

namespace {

struct Header {
    std::size_t vocab_size = 0;
    std::size_t dim = 0;
    std::size_t body_offset = 0;
};

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

template <class Int>
bool parse_uint(std::string_view s, Int &out) {
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_float(std::string_view s, float &out) {
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && is_blank(line[i])) ++i;
        const auto begin = i;
        while (i < line.size() && !is_blank(line[i])) ++i;
        if (i > begin) fields.push_back(line.substr(begin, i - begin));
    }
    return fields;
}

Header parse_header(std::string_view bytes) {
    const auto nl = bytes.find('\n');
    if (nl == std::string_view::npos) throw FormatError("line 1: missing or truncated header");
    const auto fields = split_fields(bytes.substr(0, nl));
    Header h;
    if (fields.size() != 2 || !parse_uint(fields[0], h.vocab_size) ||
        !parse_uint(fields[1], h.dim)) {
        throw FormatError("line 1: malformed header, expected \"<count> <dim>\"");
    }
    if (h.vocab_size == 0 || h.dim == 0) {
        throw FormatError("line 1: header declares an empty model");
    }
    h.body_offset = nl + 1;
    return h;
}

// True when `line` is a complete text record with `dim` numeric fields.
bool is_text_record(std::string_view line, std::size_t dim) {
    const auto fields = split_fields(line);
    if (fields.size() != dim + 1) return false;
    float x = 0;
    for (std::size_t i = 1; i < fields.size(); ++i) {
        if (!parse_float(fields[i], x)) return false;
    }
    return true;
}

void check_word(std::string_view word, const std::string &where) {
    if (word.empty()) throw FormatError(where + ": empty word");
    if (const auto bad = utf8::find_invalid(word)) {
        throw FormatError(where + ": word is not valid UTF-8 (byte " + std::to_string(*bad) + ")");
    }
}

EmbeddingModel parse_text(std::string_view bytes, const Header &h) {
    std::vector<std::string> words;
    std::vector<float> vectors;
    words.reserve(h.vocab_size);
    vectors.reserve(h.vocab_size * h.dim);

    std::size_t pos = h.body_offset;
    std::size_t line_no = 1;
    while (words.size() < h.vocab_size) {
        ++line_no;
        if (pos >= bytes.size()) {
            throw FormatError("line " + std::to_string(line_no) + ": truncated file, expected " +
                              std::to_string(h.vocab_size) + " records, found " +
                              std::to_string(words.size()));
        }
        auto nl = bytes.find('\n', pos);
        if (nl == std::string_view::npos) {
            throw FormatError("line " + std::to_string(line_no) +
                              ": truncated record (no terminating newline)");
        }
        const auto line = bytes.substr(pos, nl - pos);
        pos = nl + 1;
        const auto fields = split_fields(line);
        const std::string where = "line " + std::to_string(line_no);
        if (fields.size() != h.dim + 1) {
            throw FormatError(where + ": expected " + std::to_string(h.dim) + " components, found " +
                              std::to_string(fields.empty() ? 0 : fields.size() - 1));
        }
        check_word(fields[0], where);
        words.emplace_back(fields[0]);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            float x = 0;
            if (!parse_float(fields[i], x)) {
                throw FormatError(where + ": component " + std::to_string(i) +
                                  " is not a number: '" + std::string(fields[i]) + "'");
            }
            if (!std::isfinite(x)) {
                throw FormatError(where + ": component " + std::to_string(i) + " is not finite");
            }
            vectors.push_back(x);
        }
    }
    for (; pos < bytes.size(); ++pos) {
        if (!is_blank(bytes[pos]) && bytes[pos] != '\n') {
            throw FormatError("line " + std::to_string(line_no + 1) +
                              ": more records than the header declares (" +
                              std::to_string(h.vocab_size) + ")");
        }
    }
    return EmbeddingModel(Vocabulary::from_words(std::move(words)), std::move(vectors), h.dim);
}

float read_le_float(const char *p) {
    std::array<unsigned char, 4> b;
    std::memcpy(b.data(), p, 4);
    if constexpr (std::endian::native == std::endian::big) std::swap(b[0], b[3]), std::swap(b[1], b[2]);
    float x;
    std::memcpy(&x, b.data(), 4);
    return x;
}

void write_le_float(std::string &out, float x) {
    std::array<unsigned char, 4> b;
    std::memcpy(b.data(), &x, 4);
    if constexpr (std::endian::native == std::endian::big) std::swap(b[0], b[3]), std::swap(b[1], b[2]);
    out.append(reinterpret_cast<const char *>(b.data()), 4);
}

EmbeddingModel parse_binary(std::string_view bytes, const Header &h) {
    std::vector<std::string> words;
    std::vector<float> vectors;
    words.reserve(h.vocab_size);
    vectors.reserve(h.vocab_size * h.dim);

    const std::size_t vec_bytes = 4 * h.dim;
    std::size_t pos = h.body_offset;
    while (words.size() < h.vocab_size) {
        while (pos < bytes.size() && bytes[pos] == '\n') ++pos;
        const auto record_start = pos;
        const std::string where = "byte " + std::to_string(record_start) + " (record " +
                                  std::to_string(words.size() + 1) + ")";
        const auto space = bytes.find(' ', pos);
        if (space == std::string_view::npos) {
            throw FormatError(where + ": truncated file, expected " +
                              std::to_string(h.vocab_size) + " records, found " +
                              std::to_string(words.size()));
        }
        const auto word = bytes.substr(pos, space - pos);
        check_word(word, where);
        pos = space + 1;
        if (bytes.size() - pos < vec_bytes) {
            throw FormatError(where + ": truncated vector, need " + std::to_string(vec_bytes) +
                              " bytes, have " + std::to_string(bytes.size() - pos));
        }
        words.emplace_back(word);
        for (std::size_t i = 0; i < h.dim; ++i) {
            const float x = read_le_float(bytes.data() + pos + 4 * i);
            if (!std::isfinite(x)) {
                throw FormatError("byte " + std::to_string(pos + 4 * i) + ": non-finite component");
            }
            vectors.push_back(x);
        }
        pos += vec_bytes;
    }
    while (pos < bytes.size() && bytes[pos] == '\n') ++pos;
    if (pos != bytes.size()) {
        throw FormatError("byte " + std::to_string(pos) + ": more records than the header declares (" +
                          std::to_string(h.vocab_size) + ")");
    }
    return EmbeddingModel(Vocabulary::from_words(std::move(words)), std::move(vectors), h.dim);
}

void check_savable(const std::string &word) {
    if (word.empty() || word.find_first_of(" \t\r\n") != std::string::npos) {
        throw ValidationError("word '" + word + "' cannot be stored in the interchange format");
    }
}

}  // namespace

ModelFormat detect_format(std::string_view bytes) {
    const Header h = parse_header(bytes);
    const auto body = bytes.substr(h.body_offset);
    const auto nl = body.find('\n');
    if (nl != std::string_view::npos && is_text_record(body.substr(0, nl), h.dim)) {
        return ModelFormat::text;
    }
    return ModelFormat::binary;
}

EmbeddingModel load_from_bytes(std::string_view bytes) {
    const Header h = parse_header(bytes);
    if (detect_format(bytes) == ModelFormat::text) return parse_text(bytes, h);
    return parse_binary(bytes, h);
}

EmbeddingModel load(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file " + path.string());
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw IoError("read failure in model file " + path.string());
    try {
        return load_from_bytes(bytes);
    } catch (const FormatError &e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void save(const EmbeddingModel &model, const std::filesystem::path &path, ModelFormat format) {
    std::string out;
    out.reserve(model.size() * (model.dim() * (format == ModelFormat::text ? 12 : 4) + 16));
    out += std::to_string(model.size()) + " " + std::to_string(model.dim()) + "\n";

    std::array<char, 32> buf;
    for (WordId id = 0; id < model.size(); ++id) {
        const auto &word = model.vocab().word(id);
        check_savable(word);
        out += word;
        const auto vec = model.vector(id);
        if (format == ModelFormat::text) {
            for (float x : vec) {
                out.push_back(' ');
                const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                               std::chars_format::general, 9);
                out.append(buf.data(), res.ptr);
            }
            out.push_back('\n');
        } else {
            out.push_back(' ');
            for (float x : vec) write_le_float(out, x);
        }
    }

    // Write-then-rename so a failed save never leaves a half-written model.
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f.write(out.data(), static_cast<std::streamsize>(out.size()));
        f.flush();
        if (!f) throw IoError("write failure on " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace lexsim
