#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "topiccf/ingest.hpp"
#include "topiccf/lda.hpp"

namespace topiccf {

/// A user's distribution over latent topics. Undefined (empty distribution)
/// when none of the user's rated items has a topic profile.
struct UserPersona {
    UserId user = 0;
    std::vector<double> distribution;
    std::size_t documented_item_count = 0;
    std::size_t undocumented_item_count = 0;

    bool defined() const { return !distribution.empty(); }
};

using PersonaTable = std::map<UserId, UserPersona>;

/// Rating-weighted mixture of the topic profiles of the rated items. Weights
/// are normalized over documented items only, so a defined persona is a
/// proper distribution.
UserPersona build_persona(UserId user, std::span<const ItemRating> ratings, const TopicProfiles& profiles);

struct PersonaBuild {
    PersonaTable personas;
    std::size_t undefined = 0;
};

/// One persona per user of `train`.
PersonaBuild build_all_personas(const RatingDataset& train, const TopicProfiles& profiles);

/// `user_id,p_0,...,p_{T-1}` per user (undefined personas carry only the
/// id), then a `#undefined:<count>` trailer.
void write_personas_csv(std::ostream& out, const PersonaTable& personas);
/// Item counts are not persisted and read back as zero.
PersonaTable parse_personas_csv(std::istream& in);
PersonaTable load_personas_csv(const std::filesystem::path& path);

}  // namespace topiccf
