#include "codealign/error.hpp"

namespace codealign {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedEncoding: return "MalformedEncoding";
        case ErrorCode::UnsupportedLanguage: return "UnsupportedLanguage";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DegenerateRow: return "DegenerateRow";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::StaleIndex: return "StaleIndex";
        case ErrorCode::KOutOfRange: return "KOutOfRange";
        case ErrorCode::CorruptFile: return "CorruptFile";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::GeneratorUnavailable: return "GeneratorUnavailable";
        case ErrorCode::EmptyReply: return "EmptyReply";
        case ErrorCode::QuotaUnsatisfiable: return "QuotaUnsatisfiable";
        case ErrorCode::ConfigMismatch: return "ConfigMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoFailure: return "IoFailure";
    }
    return "UnknownError";
}

} // namespace codealign
