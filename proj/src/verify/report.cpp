#include <algorithm>

#include "localize/verify.hpp"

namespace localize::verify {

namespace {

void keep_lowest_seeds(std::vector<Counterexample>& examples) {
    std::stable_sort(examples.begin(), examples.end(),
                     [](const Counterexample& a, const Counterexample& b) {
                         return a.spec.seed < b.spec.seed;
                     });
    if (examples.size() > SuiteReport::kMaxCounterexamples) {
        examples.resize(SuiteReport::kMaxCounterexamples);
    }
}

}  // namespace

PropertyResult& SuiteReport::slot(const std::string& property) {
    for (PropertyResult& p : properties_) {
        if (p.name == property) return p;
    }
    PropertyResult fresh;
    fresh.name = property;
    properties_.push_back(std::move(fresh));
    return properties_.back();
}

const PropertyResult* SuiteReport::find(const std::string& property) const {
    for (const PropertyResult& p : properties_) {
        if (p.name == property) return &p;
    }
    return nullptr;
}

void SuiteReport::record_pass(const std::string& property, double residual) {
    PropertyResult& p = slot(property);
    ++p.passed;
    p.worst_residual = std::max(p.worst_residual, residual);
}

void SuiteReport::record_failure(const std::string& property, Counterexample example) {
    PropertyResult& p = slot(property);
    ++p.failed;
    p.worst_residual = std::max(p.worst_residual, example.residual);
    p.counterexamples.push_back(std::move(example));
    keep_lowest_seeds(p.counterexamples);
}

void SuiteReport::set_note(const std::string& property, const std::string& note) {
    slot(property).note = note;
}

void SuiteReport::merge(const SuiteReport& other) {
    for (const PropertyResult& theirs : other.properties_) {
        PropertyResult& mine = slot(theirs.name);
        mine.passed += theirs.passed;
        mine.failed += theirs.failed;
        mine.worst_residual = std::max(mine.worst_residual, theirs.worst_residual);
        mine.counterexamples.insert(mine.counterexamples.end(), theirs.counterexamples.begin(),
                                    theirs.counterexamples.end());
        keep_lowest_seeds(mine.counterexamples);
        if (mine.note.empty()) mine.note = theirs.note;
    }
}

std::size_t SuiteReport::passes() const {
    std::size_t n = 0;
    for (const PropertyResult& p : properties_) n += p.passed;
    return n;
}

std::size_t SuiteReport::failures() const {
    std::size_t n = 0;
    for (const PropertyResult& p : properties_) n += p.failed;
    return n;
}

io::Json SuiteReport::to_json() const {
    io::Json props = io::Json::array();
    for (const PropertyResult& p : properties_) {
        io::Json j;
        j["name"] = p.name;
        j["passed"] = p.passed;
        j["failed"] = p.failed;
        j["worst_residual"] = p.worst_residual;
        if (!p.note.empty()) j["note"] = p.note;
        io::Json examples = io::Json::array();
        for (const Counterexample& c : p.counterexamples) examples.push_back(c.payload);
        j["counterexamples"] = std::move(examples);
        props.push_back(std::move(j));
    }
    io::Json out;
    out["suite"] = suite_;
    out["passed"] = passes();
    out["failed"] = failures();
    out["properties"] = std::move(props);
    return out;
}

}  // namespace localize::verify
