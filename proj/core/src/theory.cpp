#include "hfentropy/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

#include "hfentropy/error.hpp"

namespace hfentropy::theory {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;

void check_parameters(const ProcessKind& process) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Ar1>) {
                if (!(std::abs(p.phi) < 1.0)) throw SpecError("AR(1) requires |phi| < 1");
            } else if constexpr (std::is_same_v<T, Ma1>) {
                if (!(std::abs(p.theta) < 1.0)) throw SpecError("MA(1) requires |theta| < 1");
            }
        },
        process);
}

// Probability that two signs `gap` steps apart are equal (same) or differ.
double pair_measure(const ProcessKind& process, bool same, int gap) {
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, WhiteNoise>) {
                return 0.25;
            } else if constexpr (std::is_same_v<T, Ar1>) {
                const double r = std::pow(p.phi, gap + 1);
                return std::acos(same ? -r : r) / kTwoPi;
            } else {
                if (gap > 0) return 0.25;
                const double rho = p.theta / (1.0 + p.theta * p.theta);
                return std::acos(same ? -rho : rho) / kTwoPi;
            }
        },
        process);
}

double entropy_term(double mu) { return mu > 0.0 ? -mu * std::log2(mu) : 0.0; }

double sorted_sum(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

}  // namespace

double lag_one_correlation(const ProcessKind& process) {
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, WhiteNoise>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Ar1>) {
                return p.phi;
            } else {
                return p.theta / (1.0 + p.theta * p.theta);
            }
        },
        process);
}

double string_measure(const ProcessKind& process, std::string_view symbols, int gap) {
    check_parameters(process);
    if (gap < 0) throw InputError("gap must be non-negative");
    for (char c : symbols) {
        if (c != '0' && c != '1') throw InputError("sign strings use only '0' and '1'");
    }
    switch (symbols.size()) {
        case 1:
            if (gap != 0) throw NotImplementedError("a gap needs two symbols");
            return 0.5;
        case 2:
            return pair_measure(process, symbols[0] == symbols[1], gap);
        case 3: {
            if (gap != 0) throw NotImplementedError("length-3 strings are contiguous only");
            std::string s(symbols);
            // Complement so the string starts with 0, then 011 reverses to 110 = complement of 001.
            if (s[0] == '1') {
                for (auto& c : s) c = c == '0' ? '1' : '0';
            }
            const double mu00 = pair_measure(process, true, 0);
            const double mu01 = pair_measure(process, false, 0);
            const double mu0_0 = pair_measure(process, true, 1);
            const double mu001 = (0.5 - mu0_0) / 2.0;
            if (s == "000") return mu00 - mu001;
            if (s == "001" || s == "011") return mu001;
            return mu01 - mu001;  // "010"
        }
        default:
            throw NotImplementedError("no closed-form measure for strings of length " +
                                      std::to_string(symbols.size()));
    }
}

TheoreticalEntropies theoretical_entropies(const ProcessKind& process) {
    check_parameters(process);
    TheoreticalEntropies out;
    if (std::holds_alternative<WhiteNoise>(process)) return out;

    const double rho = lag_one_correlation(process);
    const double mu00 = std::acos(-rho) / kTwoPi;
    const double mu01 = std::acos(rho) / kTwoPi;
    double mu000 = 0.0;
    double mu001 = 0.0;
    double mu010 = 0.0;
    if (const auto* ar = std::get_if<Ar1>(&process)) {
        const double phi2 = ar->phi * ar->phi;
        mu001 = std::acos(phi2) / kFourPi;
        mu000 = mu00 - mu001;
        mu010 = mu01 - mu001;
    } else {
        mu001 = 0.125;
        mu000 = mu00 - 0.125;
        mu010 = mu01 - 0.125;
    }

    out.H1 = 1.0;
    out.H2 = sorted_sum({entropy_term(mu00), entropy_term(mu00), entropy_term(mu01), entropy_term(mu01)});
    out.H3 = sorted_sum({entropy_term(mu000), entropy_term(mu000), entropy_term(mu001), entropy_term(mu001),
                         entropy_term(mu001), entropy_term(mu001), entropy_term(mu010), entropy_term(mu010)});
    out.h2 = out.H2 - out.H1;
    out.h3 = out.H3 - out.H2;
    return out;
}

double theoretical_conditional(const ProcessKind& process, int k) {
    const auto t = theoretical_entropies(process);
    if (k == 2) return t.h2;
    if (k == 3) return t.h3;
    throw UnsupportedOrderError("closed-form conditional entropy exists only for k = 2 and k = 3");
}

}  // namespace hfentropy::theory
