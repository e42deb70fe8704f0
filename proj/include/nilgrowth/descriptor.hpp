#ifndef NILGROWTH_DESCRIPTOR_HPP
#define NILGROWTH_DESCRIPTOR_HPP

// Text descriptors for groups and generating sets, as accepted on the
// command line:
//
//   group      := kind [":" params]
//   kind       := "heisenberg" | "unitriangular" | "free" | "lattice" | "cyclic"
//   params     := key "=" int {"," key "=" int}      (e.g. "n=4", "d=2,s=3")
//   generators := "standard" | "S(j,k)" | element {";" element}
//   element    := "(" scalar {"," scalar} ")"
//
// A combined form "group:generators" is also accepted ("heisenberg:standard",
// "heisenberg:S(2,8)"). Explicit element lists are validated, not repaired:
// they must be symmetric and contain the identity, and violations are
// reported naming the offending element. Every descriptor round-trips
// through its canonical rendering.

#include "nilgrowth/groups.hpp"
#include "nilgrowth/heisenberg.hpp"
#include "nilgrowth/rational.hpp"

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nilgrowth {

enum class GroupKind { heisenberg, unitriangular, free_nilpotent, lattice, cyclic };

struct GroupDescriptor {
    GroupKind kind = GroupKind::heisenberg;
    std::map<std::string, long long> params;        // validated per kind
    std::optional<std::string> generators;          // trailing generator spec, if combined

    std::string canonical() const {
        std::string out;
        switch (kind) {
            case GroupKind::heisenberg: out = "heisenberg"; break;
            case GroupKind::unitriangular: out = "unitriangular:n=" + std::to_string(params.at("n")); break;
            case GroupKind::free_nilpotent:
                out = "free:d=" + std::to_string(params.at("d")) + ",s=" + std::to_string(params.at("s"));
                break;
            case GroupKind::lattice: out = "lattice:d=" + std::to_string(params.at("d")); break;
            case GroupKind::cyclic: out = "cyclic:q=" + std::to_string(params.at("q")); break;
        }
        if (generators) out += ":" + *generators;
        return out;
    }
};

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string piece;
    for (char c : text) {
        if (c == sep) {
            out.push_back(std::move(piece));
            piece.clear();
        } else {
            piece += c;
        }
    }
    out.push_back(std::move(piece));
    return out;
}

inline long long parse_int(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed " + what + ": \"" + text + "\"");
    }
    if (used != text.size()) throw std::invalid_argument("malformed " + what + ": \"" + text + "\"");
    return value;
}

// "k=v,k=v" with integer values.
inline std::map<std::string, long long> parse_params(const std::string& text) {
    std::map<std::string, long long> out;
    for (const std::string& piece : split(text, ',')) {
        auto eq = piece.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw std::invalid_argument("malformed parameter \"" + piece + "\": expected key=value");
        }
        out[piece.substr(0, eq)] = parse_int(piece.substr(eq + 1), "parameter " + piece.substr(0, eq));
    }
    return out;
}

inline bool looks_like_params(const std::string& text) {
    return text.find('=') != std::string::npos && text.find('(') == std::string::npos;
}

inline void require_params(const GroupDescriptor& d, const std::vector<std::string>& keys) {
    for (const auto& key : keys) {
        if (!d.params.count(key)) {
            throw std::invalid_argument("group descriptor is missing the parameter \"" + key + "\"");
        }
    }
    if (d.params.size() != keys.size()) throw std::invalid_argument("group descriptor has unknown parameters");
}

}  // namespace detail

inline GroupDescriptor parse_group_descriptor(const std::string& text) {
    auto segments = detail::split(text, ':');
    GroupDescriptor desc;
    const std::string& kind = segments[0];
    if (kind == "heisenberg") {
        desc.kind = GroupKind::heisenberg;
    } else if (kind == "unitriangular") {
        desc.kind = GroupKind::unitriangular;
    } else if (kind == "free") {
        desc.kind = GroupKind::free_nilpotent;
    } else if (kind == "lattice") {
        desc.kind = GroupKind::lattice;
    } else if (kind == "cyclic") {
        desc.kind = GroupKind::cyclic;
    } else {
        throw std::invalid_argument("unknown group kind \"" + kind + "\"");
    }
    std::size_t next = 1;
    if (next < segments.size() && detail::looks_like_params(segments[next])) {
        desc.params = detail::parse_params(segments[next]);
        ++next;
    }
    if (next < segments.size()) {
        std::string rest = segments[next];
        for (std::size_t i = next + 1; i < segments.size(); ++i) rest += ":" + segments[i];
        if (rest.empty()) throw std::invalid_argument("empty generator spec in \"" + text + "\"");
        desc.generators = rest;
    }
    switch (desc.kind) {
        case GroupKind::heisenberg:
            detail::require_params(desc, {});
            break;
        case GroupKind::unitriangular:
            detail::require_params(desc, {"n"});
            if (desc.params["n"] < 2) throw std::invalid_argument("unitriangular rank must be at least 2");
            break;
        case GroupKind::free_nilpotent:
            detail::require_params(desc, {"d", "s"});
            if (desc.params["d"] < 1 || desc.params["s"] < 1) {
                throw std::invalid_argument("free-nilpotent parameters must be positive");
            }
            break;
        case GroupKind::lattice:
            detail::require_params(desc, {"d"});
            if (desc.params["d"] < 1) throw std::invalid_argument("lattice dimension must be positive");
            break;
        case GroupKind::cyclic:
            detail::require_params(desc, {"q"});
            if (desc.params["q"] < 1) throw std::invalid_argument("cyclic modulus must be positive");
            break;
    }
    return desc;
}

using AnyContext =
    std::variant<HeisenbergContext, UnitriangularContext, FreeNilpotentContext, LieLatticeContext, CyclicContext>;

inline AnyContext make_context(const GroupDescriptor& desc) {
    switch (desc.kind) {
        case GroupKind::heisenberg: return HeisenbergContext{};
        case GroupKind::unitriangular: return UnitriangularContext(static_cast<int>(desc.params.at("n")));
        case GroupKind::free_nilpotent:
            return FreeNilpotentContext(static_cast<int>(desc.params.at("d")),
                                        static_cast<int>(desc.params.at("s")));
        case GroupKind::lattice: return integer_lattice_context(static_cast<int>(desc.params.at("d")));
        case GroupKind::cyclic: return CyclicContext(desc.params.at("q"));
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Generator specs.

namespace detail {

// "S(j,k)" -> (j, k).
inline std::optional<std::pair<long long, long long>> parse_s_family_spec(const std::string& spec) {
    if (spec.size() < 6 || spec.compare(0, 2, "S(") != 0 || spec.back() != ')') return std::nullopt;
    auto fields = split(spec.substr(2, spec.size() - 3), ',');
    if (fields.size() != 2) throw std::invalid_argument("malformed family \"" + spec + "\": expected S(j,k)");
    return std::make_pair(parse_int(fields[0], "S(j,k) parameter"), parse_int(fields[1], "S(j,k) parameter"));
}

// "(a,b,c);(d,e,f)" -> rows of scalar strings.
inline std::vector<std::vector<std::string>> parse_tuple_list(const std::string& spec) {
    std::vector<std::vector<std::string>> out;
    for (const std::string& piece : split(spec, ';')) {
        if (piece.size() < 2 || piece.front() != '(' || piece.back() != ')') {
            throw std::invalid_argument("malformed element \"" + piece + "\": expected (a,b,...)");
        }
        out.push_back(split(piece.substr(1, piece.size() - 2), ','));
    }
    return out;
}

template <typename Context>
GeneratingSet<Context> explicit_generating_set(const Context& ctx,
                                               std::vector<typename Context::Element> elements) {
    std::set<typename Context::Element> dedup(elements.begin(), elements.end());
    std::vector<typename Context::Element> sorted(dedup.begin(), dedup.end());
    validate_generating_set(ctx, sorted);
    return GeneratingSet<Context>{ctx, std::move(sorted)};
}

inline HeisenbergElement parse_heisenberg_element(const std::vector<std::string>& fields) {
    if (fields.size() != 3) throw std::invalid_argument("Heisenberg elements take exactly three coordinates");
    return {parse_int(fields[0], "coordinate"), parse_int(fields[1], "coordinate"),
            parse_int(fields[2], "coordinate")};
}

inline RationalVector parse_rational_vector(const std::vector<std::string>& fields, std::size_t dim) {
    if (fields.size() != dim) {
        throw std::invalid_argument("element has " + std::to_string(fields.size()) + " coordinates, expected " +
                                    std::to_string(dim));
    }
    RationalVector out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = Rational::parse(fields[i]);
    return out;
}

}  // namespace detail

inline GeneratingSet<HeisenbergContext> resolve_generators(const HeisenbergContext& ctx, const std::string& spec,
                                                           std::size_t budget) {
    if (spec.empty() || spec == "standard") return standard_generators(ctx);
    if (auto jk = detail::parse_s_family_spec(spec)) return s_family(jk->first, jk->second, budget);
    std::vector<HeisenbergElement> elements;
    for (const auto& fields : detail::parse_tuple_list(spec)) {
        elements.push_back(detail::parse_heisenberg_element(fields));
    }
    return detail::explicit_generating_set(ctx, std::move(elements));
}

inline GeneratingSet<UnitriangularContext> resolve_generators(const UnitriangularContext& ctx,
                                                              const std::string& spec, std::size_t) {
    if (spec.empty() || spec == "standard") return standard_generators(ctx);
    if (detail::parse_s_family_spec(spec)) {
        throw std::invalid_argument("the S(j,k) family is a Heisenberg generating set");
    }
    std::vector<UnitriangularElement> elements;
    for (const auto& fields : detail::parse_tuple_list(spec)) {
        if (fields.size() != ctx.coord_count()) {
            throw std::invalid_argument("unitriangular elements take " + std::to_string(ctx.coord_count()) +
                                        " strictly-upper entries");
        }
        UnitriangularElement e;
        for (const auto& f : fields) e.push_back(detail::parse_int(f, "matrix entry"));
        elements.push_back(std::move(e));
    }
    return detail::explicit_generating_set(ctx, std::move(elements));
}

inline GeneratingSet<FreeNilpotentContext> resolve_generators(const FreeNilpotentContext& ctx,
                                                              const std::string& spec, std::size_t) {
    if (spec.empty() || spec == "standard") return standard_generators(ctx);
    if (detail::parse_s_family_spec(spec)) {
        throw std::invalid_argument("the S(j,k) family is a Heisenberg generating set");
    }
    std::vector<RationalVector> elements;
    const auto dim = static_cast<std::size_t>(ctx.table().dim());
    for (const auto& fields : detail::parse_tuple_list(spec)) {
        elements.push_back(detail::parse_rational_vector(fields, dim));
    }
    return detail::explicit_generating_set(ctx, std::move(elements));
}

inline GeneratingSet<LieLatticeContext> resolve_generators(const LieLatticeContext& ctx, const std::string& spec,
                                                           std::size_t) {
    if (spec.empty() || spec == "standard") return standard_generators(ctx);
    if (detail::parse_s_family_spec(spec)) {
        throw std::invalid_argument("the S(j,k) family is a Heisenberg generating set");
    }
    std::vector<RationalVector> elements;
    for (const auto& fields : detail::parse_tuple_list(spec)) {
        elements.push_back(detail::parse_rational_vector(fields, static_cast<std::size_t>(ctx.dim())));
    }
    return detail::explicit_generating_set(ctx, std::move(elements));
}

inline GeneratingSet<CyclicContext> resolve_generators(const CyclicContext& ctx, const std::string& spec,
                                                       std::size_t) {
    if (spec.empty() || spec == "standard") return standard_generators(ctx);
    if (detail::parse_s_family_spec(spec)) {
        throw std::invalid_argument("the S(j,k) family is a Heisenberg generating set");
    }
    std::vector<long long> elements;
    for (const auto& fields : detail::parse_tuple_list(spec)) {
        if (fields.size() != 1) throw std::invalid_argument("cyclic elements take one coordinate");
        long long raw = detail::parse_int(fields[0], "residue");
        elements.push_back(((raw % ctx.modulus()) + ctx.modulus()) % ctx.modulus());
    }
    return detail::explicit_generating_set(ctx, std::move(elements));
}

// ---------------------------------------------------------------------------
// Canonical rendering of a generating-set spec: named families pass through,
// element lists are re-rendered from the canonical sorted elements.

namespace detail {

inline std::string render_tuple_list(const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r) out += ';';
        out += '(';
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            if (c) out += ',';
            out += rows[r][c];
        }
        out += ')';
    }
    return out;
}

}  // namespace detail

template <typename Context>
std::string canonical_generator_spec(const Context&, const std::string& spec,
                                     const GeneratingSet<Context>& resolved) {
    if (spec.empty() || spec == "standard") return "standard";
    if (auto jk = detail::parse_s_family_spec(spec)) {
        return "S(" + std::to_string(jk->first) + "," + std::to_string(jk->second) + ")";
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto& g : resolved.elements) {
        if constexpr (std::is_same_v<typename Context::Element, HeisenbergElement>) {
            rows.push_back({std::to_string(g[0]), std::to_string(g[1]), std::to_string(g[2])});
        } else if constexpr (std::is_same_v<typename Context::Element, long long>) {
            rows.push_back({std::to_string(g)});
        } else if constexpr (std::is_same_v<typename Context::Element, RationalVector>) {
            std::vector<std::string> row;
            for (const auto& c : g) row.push_back(c.str());
            rows.push_back(std::move(row));
        } else {
            std::vector<std::string> row;
            for (long long c : g) row.push_back(std::to_string(c));
            rows.push_back(std::move(row));
        }
    }
    return detail::render_tuple_list(rows);
}

}  // namespace nilgrowth

#endif  // NILGROWTH_DESCRIPTOR_HPP
