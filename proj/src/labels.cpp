#include "reviewpulse/labels.hpp"

#include "reviewpulse/errors.hpp"

namespace reviewpulse {

std::string_view to_string(Validity v)
{
    switch (v) {
    case Validity::None:
        return "None";
    case Validity::General:
        return "General";
    case Validity::Valid:
        return "Valid";
    }
    return "None";
}

std::string_view to_string(Addressing v)
{
    switch (v) {
    case Addressing::Uncertain:
        return "Valid-Uncertain";
    case Addressing::Unaddressed:
        return "Valid-Unaddressed";
    case Addressing::Partially:
        return "Valid-Partially";
    case Addressing::Fully:
        return "Valid-Fully";
    }
    return "Valid-Uncertain";
}

std::string_view to_string(SixClass v)
{
    switch (v) {
    case SixClass::None:
        return "None";
    case SixClass::General:
        return "General";
    case SixClass::ValidUncertain:
        return "Valid-Uncertain";
    case SixClass::ValidUnaddressed:
        return "Valid-Unaddressed";
    case SixClass::ValidPartially:
        return "Valid-Partially";
    case SixClass::ValidFully:
        return "Valid-Fully";
    }
    return "None";
}

Validity validity_from_string(std::string_view text)
{
    if (text == "None")
        return Validity::None;
    if (text == "General")
        return Validity::General;
    if (text == "Valid")
        return Validity::Valid;
    throw BackendFormatError("unknown validity label: " + std::string(text));
}

Addressing addressing_from_string(std::string_view text)
{
    if (text == "Valid-Uncertain")
        return Addressing::Uncertain;
    if (text == "Valid-Unaddressed")
        return Addressing::Unaddressed;
    if (text == "Valid-Partially")
        return Addressing::Partially;
    if (text == "Valid-Fully")
        return Addressing::Fully;
    throw BackendFormatError("unknown addressing label: " + std::string(text));
}

SixClass six_class_from_string(std::string_view text)
{
    if (text == "None")
        return SixClass::None;
    if (text == "General")
        return SixClass::General;
    if (text == "Valid-Uncertain")
        return SixClass::ValidUncertain;
    if (text == "Valid-Unaddressed")
        return SixClass::ValidUnaddressed;
    if (text == "Valid-Partially")
        return SixClass::ValidPartially;
    if (text == "Valid-Fully")
        return SixClass::ValidFully;
    throw BackendFormatError("unknown six-class label: " + std::string(text));
}

SixClass six_class_of(Validity v)
{
    switch (v) {
    case Validity::None:
        return SixClass::None;
    case Validity::General:
        return SixClass::General;
    case Validity::Valid:
        throw Error("Valid has no six-class value without a Stage-2 label");
    }
    return SixClass::None;
}

SixClass six_class_of(Addressing v)
{
    switch (v) {
    case Addressing::Uncertain:
        return SixClass::ValidUncertain;
    case Addressing::Unaddressed:
        return SixClass::ValidUnaddressed;
    case Addressing::Partially:
        return SixClass::ValidPartially;
    case Addressing::Fully:
        return SixClass::ValidFully;
    }
    return SixClass::ValidUncertain;
}

bool is_valid_class(SixClass v)
{
    return v == SixClass::ValidUncertain || v == SixClass::ValidUnaddressed
        || v == SixClass::ValidPartially || v == SixClass::ValidFully;
}

bool is_addressed(SixClass v)
{
    return v == SixClass::ValidPartially || v == SixClass::ValidFully;
}

const std::vector<SixClass>& all_six_classes()
{
    static const std::vector<SixClass> all = {
        SixClass::None,
        SixClass::General,
        SixClass::ValidUncertain,
        SixClass::ValidUnaddressed,
        SixClass::ValidPartially,
        SixClass::ValidFully,
    };
    return all;
}

int conservative_rank(Validity v)
{
    return static_cast<int>(v);
}

int conservative_rank(Addressing v)
{
    return static_cast<int>(v);
}

int conservative_rank(SixClass v)
{
    return static_cast<int>(v);
}

} // namespace reviewpulse
