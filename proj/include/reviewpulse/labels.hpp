#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reviewpulse {

// Stage-1 verdict: does the comment contain specific, actionable content?
enum class Validity { None, General, Valid };

// Stage-2 verdict for Valid comments.
enum class Addressing { Uncertain, Unaddressed, Partially, Fully };

// The combined six-class label.
enum class SixClass {
    None,
    General,
    ValidUncertain,
    ValidUnaddressed,
    ValidPartially,
    ValidFully,
};

std::string_view to_string(Validity v);
std::string_view to_string(Addressing v);
std::string_view to_string(SixClass v);

Validity validity_from_string(std::string_view text);
Addressing addressing_from_string(std::string_view text);
SixClass six_class_from_string(std::string_view text);

SixClass six_class_of(Validity v);            // None/General only
SixClass six_class_of(Addressing v);          // Valid-* labels
bool is_valid_class(SixClass v);              // one of the four Valid-*
bool is_addressed(SixClass v);                // Partially or Fully

const std::vector<SixClass>& all_six_classes();

// Conservative rank used for vote tie-breaks: labels claiming less
// addressing rank lower and win ties.
int conservative_rank(Validity v);
int conservative_rank(Addressing v);
int conservative_rank(SixClass v);

} // namespace reviewpulse
