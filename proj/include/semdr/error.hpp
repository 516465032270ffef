#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semdr {

enum class Errc {
  EmptyInput,
  MalformedTriple,
  NotBuilt,
  UnknownConcept,
  UnknownDocument,
  IndexMissing,
  CyclicTaxonomy,
  EmptyQuery,
  NoAnchors,
  UnreachableGroup,
  TooLarge,
  UnreadableFile,
  UnsupportedFormat,
  EmptyDocument,
  TooFewDocuments,
  ModelMissing,
  EmptyCorpus,
  UnknownLocation,
  NoLinkCondition,
  TypeMismatch,
  AllReferencesEmpty,
  IdMismatch,
  CorruptState,
  InvalidConfig,
  ParseError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// message holds the human-readable detail (file/line where it applies).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace semdr
