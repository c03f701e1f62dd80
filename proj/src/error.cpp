// SPDX-License-Identifier: Apache-2.0
#include "tcqa/error.hpp"

namespace tcqa {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedHtml: return "MalformedHtml";
    case ErrorCode::NestedTable: return "NestedTable";
    case ErrorCode::SpanConflict: return "SpanConflict";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::DuplicateCellId: return "DuplicateCellId";
    case ErrorCode::UnknownCellId: return "UnknownCellId";
    case ErrorCode::InvalidStyle: return "InvalidStyle";
    case ErrorCode::OverflowingStyle: return "OverflowingStyle";
    case ErrorCode::OutOfPage: return "OutOfPage";
    case ErrorCode::EmptyAnswer: return "EmptyAnswer";
    case ErrorCode::DuplicatePrediction: return "DuplicatePrediction";
    case ErrorCode::DuplicateQaId: return "DuplicateQaId";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace tcqa
