#include "termtk/core.hpp"

#include <stdexcept>
#include <unordered_set>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace termtk {

namespace {

bool is_ascii(std::string_view s) {
  for (unsigned char c : s)
    if (c >= 0x80) return false;
  return true;
}

bool ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

const icu::Normalizer2& nfc_instance() {
  UErrorCode err = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(err);
  if (U_FAILURE(err) || norm == nullptr)
    throw std::runtime_error("ICU NFC normalizer unavailable");
  return *norm;
}

}  // namespace

TokenizedSentence tokenize(std::string_view line) {
  TokenizedSentence out;
  const char* data = line.data();
  const int32_t length = static_cast<int32_t>(line.size());
  int32_t i = 0;
  int32_t token_start = -1;
  while (i < length) {
    int32_t here = i;
    bool ws;
    unsigned char c = static_cast<unsigned char>(data[i]);
    if (c < 0x80) {
      ws = ascii_space(c);
      ++i;
    } else {
      UChar32 cp;
      U8_NEXT(data, i, length, cp);
      ws = cp >= 0 && u_isUWhiteSpace(cp);
    }
    if (ws) {
      if (token_start >= 0) {
        out.surface.emplace_back(data + token_start, here - token_start);
        token_start = -1;
      }
    } else if (token_start < 0) {
      token_start = here;
    }
  }
  if (token_start >= 0)
    out.surface.emplace_back(data + token_start, length - token_start);
  return out;
}

std::string join_tokens(const Tokens& tokens) {
  std::string out;
  std::size_t total = 0;
  for (const auto& t : tokens) total += t.size() + 1;
  out.reserve(total);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string detokenize(const TokenizedSentence& sentence) {
  return join_tokens(sentence.surface);
}

std::string nfc_normalize(std::string_view text) {
  if (is_ascii(text)) return std::string(text);
  const icu::Normalizer2& norm = nfc_instance();
  UErrorCode err = U_ZERO_ERROR;
  icu::StringPiece sp(text.data(), static_cast<int32_t>(text.size()));
  if (norm.isNormalizedUTF8(sp, err) && U_SUCCESS(err))
    return std::string(text);
  err = U_ZERO_ERROR;
  std::string result;
  icu::StringByteSink<std::string> sink(&result);
  norm.normalizeUTF8(0, sp, sink, nullptr, err);
  if (U_FAILURE(err))
    throw std::runtime_error("NFC normalization failed");
  return result;
}

std::string utf8_lowercase(std::string_view text) {
  if (is_ascii(text)) {
    std::string out(text);
    for (char& c : out)
      if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    return out;
  }
  std::string out;
  out.reserve(text.size());
  const char* data = text.data();
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  char buf[U8_MAX_LENGTH];
  while (i < length) {
    UChar32 cp;
    U8_NEXT(data, i, length, cp);
    if (cp < 0) continue;  // skip ill-formed bytes
    UChar32 lower = u_tolower(cp);
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(reinterpret_cast<uint8_t*>(buf), n, U8_MAX_LENGTH, lower, error);
    if (!error) out.append(buf, n);
  }
  return out;
}

bool add_variant(ConstraintSpec& c, Tokens variant) {
  for (const auto& v : c.variants)
    if (v == variant) return false;
  c.variants.push_back(std::move(variant));
  return true;
}

void validate(const ConstraintSpec& c, std::optional<std::size_t> source_len) {
  if (c.variants.empty())
    throw std::invalid_argument("constraint has no variants");
  for (const auto& v : c.variants) {
    if (v.empty())
      throw std::invalid_argument("constraint variant is empty");
    for (const auto& tok : v)
      if (tok.empty())
        throw std::invalid_argument("constraint variant contains an empty token");
  }
  for (std::size_t i = 0; i < c.variants.size(); ++i)
    for (std::size_t j = i + 1; j < c.variants.size(); ++j)
      if (c.variants[i] == c.variants[j])
        throw std::invalid_argument("constraint has duplicate variants");
  if (c.source_span) {
    if (c.origin != ConstraintOrigin::TermBaseMatch)
      throw std::invalid_argument("source span on a sampled constraint");
    if (c.source_span->empty())
      throw std::invalid_argument("empty source span");
    if (source_len && c.source_span->end > *source_len)
      throw std::invalid_argument("source span out of range");
  }
}

}  // namespace termtk
