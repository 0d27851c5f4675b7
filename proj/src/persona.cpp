#include "topiccf/persona.hpp"

#include <fstream>
#include <sstream>

#include "topiccf/error.hpp"
#include "topiccf/parallel.hpp"

namespace topiccf {

UserPersona build_persona(UserId user, std::span<const ItemRating> ratings, const TopicProfiles& profiles) {
    UserPersona persona;
    persona.user = user;

    double weight_sum = 0.0;
    for (const auto& r : ratings) {
        if (profiles.contains(r.item)) {
            weight_sum += r.rating;
            ++persona.documented_item_count;
        } else {
            ++persona.undocumented_item_count;
        }
    }
    if (persona.documented_item_count == 0) return persona;

    for (const auto& r : ratings) {
        const auto it = profiles.find(r.item);
        if (it == profiles.end()) continue;
        const auto& theta = it->second;
        if (persona.distribution.empty()) persona.distribution.assign(theta.size(), 0.0);
        if (theta.size() != persona.distribution.size()) {
            throw RangeError("topic profile of item " + std::to_string(r.item) + " has a different width");
        }
        const double w = r.rating / weight_sum;
        for (std::size_t t = 0; t < theta.size(); ++t) persona.distribution[t] += w * theta[t];
    }
    return persona;
}

PersonaBuild build_all_personas(const RatingDataset& train, const TopicProfiles& profiles) {
    std::vector<UserPersona> built(train.num_users());
    parallel_for(train.num_users(), [&](std::size_t u) {
        built[u] = build_persona(train.users()[u], train.ratings_at(u), profiles);
    });
    PersonaBuild out;
    for (auto& p : built) {
        if (!p.defined()) ++out.undefined;
        const auto id = p.user;
        out.personas.emplace(id, std::move(p));
    }
    return out;
}

void write_personas_csv(std::ostream& out, const PersonaTable& personas) {
    std::ostringstream buf;
    buf.precision(17);
    std::size_t undefined = 0;
    for (const auto& [user, p] : personas) {
        buf << user;
        for (const double v : p.distribution) buf << ',' << v;
        buf << '\n';
        if (!p.defined()) ++undefined;
    }
    buf << "#undefined:" << undefined << '\n';
    out << buf.str();
}

PersonaTable parse_personas_csv(std::istream& in) {
    PersonaTable personas;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string field;
        UserPersona p;
        bool first = true;
        while (std::getline(fields, field, ',')) {
            try {
                std::size_t used = 0;
                if (first) {
                    p.user = std::stoll(field, &used);
                } else {
                    p.distribution.push_back(std::stod(field, &used));
                }
                if (used != field.size()) throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad persona field '" + field + "'");
            }
            first = false;
        }
        const auto id = p.user;
        personas[id] = std::move(p);
    }
    return personas;
}

PersonaTable load_personas_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_personas_csv(in);
}

}  // namespace topiccf
