#include "sigvol/weight.hpp"

#include <cmath>
#include <sstream>

#include "sigvol/error.hpp"

namespace sigvol {

Weight Weight::geometric(double r) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw InvalidArgument("geometric weight needs r >= 1");
    return {Kind::geometric, r};
}

Weight Weight::polynomial(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("polynomial weight needs alpha >= 0");
    return {Kind::polynomial, alpha};
}

Weight Weight::constant() { return {Kind::constant, 0.0}; }

Weight Weight::parse(const std::string& text) {
    auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    double value = 0.0;
    if (colon != std::string::npos) {
        try {
            std::size_t used = 0;
            value = std::stod(text.substr(colon + 1), &used);
            if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InvalidArgument("malformed weight parameter: '" + text + "'");
        }
    }
    if (kind == "geometric" && colon != std::string::npos) return geometric(value);
    if (kind == "polynomial" && colon != std::string::npos) return polynomial(value);
    if (kind == "constant" && colon == std::string::npos) return constant();
    throw InvalidArgument("unknown weight spec: '" + text + "'");
}

double Weight::operator()(std::size_t n) const {
    switch (kind_) {
    case Kind::geometric: return std::pow(param_, static_cast<double>(n));
    case Kind::polynomial: return std::pow(static_cast<double>(n) + 1.0, param_);
    case Kind::constant: return 1.0;
    }
    return 1.0;
}

double Weight::log_at(std::size_t n) const {
    switch (kind_) {
    case Kind::geometric: return static_cast<double>(n) * std::log(param_);
    case Kind::polynomial: return param_ * std::log1p(static_cast<double>(n));
    case Kind::constant: return 0.0;
    }
    return 0.0;
}

double Weight::growth_bound() const noexcept { return kind_ == Kind::geometric ? param_ : 1.0; }

std::string Weight::to_string() const {
    std::ostringstream out;
    switch (kind_) {
    case Kind::geometric: out << "geometric:" << param_; break;
    case Kind::polynomial: out << "polynomial:" << param_; break;
    case Kind::constant: out << "constant"; break;
    }
    return out.str();
}

} // namespace sigvol
