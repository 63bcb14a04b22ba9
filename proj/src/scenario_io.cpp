#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "crowdflow/scenario.hpp"

namespace crowdflow {

namespace {

int line_of(const YAML::Node& node) {
    const YAML::Mark mark = node.Mark();
    return mark.is_null() ? -1 : mark.line + 1;
}

// A mapping node plus its key path; every key must be consumed exactly once
// so that typos surface as errors instead of silently falling back to defaults.
class Section {
public:
    Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        if (!node_.IsMap()) fail(path_, node_, "expected a mapping");
    }

    [[noreturn]] static void fail(const std::string& field, const YAML::Node& node, const std::string& what) {
        throw ParseError((field.empty() ? std::string("scenario") : field) + ": " + what +
                             (line_of(node) > 0 ? " (line " + std::to_string(line_of(node)) + ")" : ""),
                         field, line_of(node));
    }

    std::string key(const std::string& name) const { return path_.empty() ? name : path_ + "." + name; }

    YAML::Node take(const std::string& name) {
        used_.insert(name);
        return get(name);
    }

    bool has(const std::string& name) const { return static_cast<bool>(get(name)); }
    YAML::Node get(const std::string& name) const { return node_[name]; }

    template <class T>
    T scalar(const YAML::Node& n, const std::string& field) const {
        if (!n.IsScalar()) fail(field, n, "expected a scalar");
        try {
            return n.as<T>();
        } catch (const YAML::BadConversion&) {
            fail(field, n, "cannot convert '" + n.Scalar() + "'");
        }
    }

    double number(const std::string& name, double fallback) {
        const YAML::Node n = take(name);
        return n ? scalar<double>(n, key(name)) : fallback;
    }

    bool flag(const std::string& name, bool fallback) {
        const YAML::Node n = take(name);
        return n ? scalar<bool>(n, key(name)) : fallback;
    }

    std::string text(const std::string& name, const std::string& fallback) {
        const YAML::Node n = take(name);
        return n ? scalar<std::string>(n, key(name)) : fallback;
    }

    std::size_t count(const std::string& name, std::size_t fallback) {
        const YAML::Node n = take(name);
        if (!n) return fallback;
        const long long v = scalar<long long>(n, key(name));
        if (v < 0) fail(key(name), n, "must be nonnegative");
        return static_cast<std::size_t>(v);
    }

    // Accepts a scalar (one-element list) or a sequence of numbers.
    std::vector<double> numbers(const std::string& name, std::vector<double> fallback) {
        const YAML::Node n = take(name);
        if (!n) return fallback;
        if (n.IsScalar()) return {scalar<double>(n, key(name))};
        if (!n.IsSequence()) fail(key(name), n, "expected a number or a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < n.size(); ++i)
            out.push_back(scalar<double>(n[i], key(name) + "[" + std::to_string(i) + "]"));
        return out;
    }

    std::vector<double> fixed(const std::string& name, std::size_t size, std::vector<double> fallback) {
        const YAML::Node n = get(name);
        std::vector<double> v = numbers(name, std::move(fallback));
        if (n && v.size() != size) fail(key(name), n, "expected " + std::to_string(size) + " numbers");
        return v;
    }

    Vec2 vec(const std::string& name, Vec2 fallback) {
        const auto v = fixed(name, 2, {fallback.x, fallback.y});
        return {v[0], v[1]};
    }

    std::optional<Section> child(const std::string& name) {
        const YAML::Node n = take(name);
        if (!n) return std::nullopt;
        return Section(n, key(name));
    }

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            const std::string k = it->first.as<std::string>();
            if (!used_.count(k)) fail(key(k), it->first, "unknown key");
        }
    }

    const YAML::Node& node() const { return node_; }
    const std::string& path() const { return path_; }

private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> used_;
};

VelocityDef parse_velocity(Section s) {
    const std::string type = s.text("type", "constant");
    VelocityDef def;
    if (type == "constant") {
        def = ConstantVelocity{s.vec("value", {})};
    } else if (type == "radial") {
        RadialVelocity v;
        v.center = s.vec("center", v.center);
        v.speed = s.number("speed", v.speed);
        def = v;
    } else if (type == "affine") {
        AffineVelocity v;
        v.axx = s.number("axx", 0.0);
        v.axy = s.number("axy", 0.0);
        v.ayx = s.number("ayx", 0.0);
        v.ayy = s.number("ayy", 0.0);
        v.offset = s.vec("offset", {});
        def = v;
    } else if (type == "cellular") {
        CellularVelocity v;
        v.amplitude = s.number("amplitude", v.amplitude);
        v.modes_x = static_cast<int>(s.count("modes_x", 1));
        v.modes_y = static_cast<int>(s.count("modes_y", 1));
        def = v;
    } else if (type == "table") {
        def = FaceTableVelocity{s.numbers("values", {})};
    } else {
        Section::fail(s.key("type"), s.node()["type"], "unknown velocity type '" + type + "'");
    }
    s.finish();
    return def;
}

GrowthBound parse_growth(Section& parent, const std::string& name) {
    const YAML::Node n = parent.node()[name];
    if (n.IsScalar()) return GrowthBound::constant(parent.number(name, 0.0));
    Section s = *parent.child(name);
    GrowthBound g;
    g.times = s.numbers("times", {});
    g.values = s.numbers("values", {});
    if (g.values.empty() || (!g.times.empty() && g.times.size() != g.values.size()))
        Section::fail(s.path(), s.node(), "growth needs one value or one value per time");
    s.finish();
    return g;
}

ReactionSpec parse_reaction(Section s) {
    ReactionSpec r;
    r.type = s.text("type", r.type);
    r.value = s.number("value", r.value);
    r.alpha = s.numbers("alpha", r.alpha);
    r.u_eq = s.numbers("u_eq", r.u_eq);
    r.r = s.numbers("r", {});
    r.g = s.numbers("g", {});
    if (s.has("lipschitz")) r.lipschitz = s.number("lipschitz", 0.0);
    if (s.has("growth")) r.growth = parse_growth(s, "growth");
    if (const YAML::Node parts = s.take("parts")) {
        if (!parts.IsSequence()) Section::fail(s.key("parts"), parts, "expected a list");
        for (std::size_t i = 0; i < parts.size(); ++i)
            r.parts.push_back(parse_reaction(Section(parts[i], s.key("parts") + "[" + std::to_string(i) + "]")));
    }
    s.finish();
    return r;
}

InitialSpec parse_initial(Section s) {
    InitialSpec init;
    init.type = s.text("type", init.type);
    init.value = s.number("value", init.value);
    init.background = s.number("background", init.background);
    init.values = s.numbers("values", {});
    const auto b = s.fixed("box", 4, {init.box.xmin, init.box.ymin, init.box.xmax, init.box.ymax});
    init.box = Extent{b[0], b[1], b[2], b[3]};
    init.center = s.vec("center", init.center);
    init.radius = s.number("radius", init.radius);
    s.finish();
    return init;
}

template <class Fn>
auto translate(const Section& s, const std::string& name, Fn fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        Section::fail(s.key(name), s.node()[name], e.what());
    }
}

Scenario parse_root(Section root) {
    Scenario sc;
    sc.name = root.text("name", sc.name);
    if (auto g = root.child("grid")) {
        sc.nx = g->count("nx", sc.nx);
        sc.ny = g->count("ny", sc.ny);
        if (sc.nx == 0 || sc.ny == 0) Section::fail(g->path(), g->node(), "nx and ny must be positive");
        const auto e = g->fixed("extent", 4, {sc.extent.xmin, sc.extent.ymin, sc.extent.xmax, sc.extent.ymax});
        sc.extent = Extent{e[0], e[1], e[2], e[3]};
        if (!(sc.extent.xmax > sc.extent.xmin && sc.extent.ymax > sc.extent.ymin))
            Section::fail(g->key("extent"), g->node()["extent"], "extent must be [xmin, ymin, xmax, ymax] with max > min");
        g->finish();
    }
    if (auto b = root.child("boundary")) {
        for (Side side : {Side::Left, Side::Right, Side::Bottom, Side::Top}) {
            const std::string name = to_string(side);
            if (!b->has(name)) continue;
            const std::string tag = b->text(name, "");
            sc.boundary.side(side) = translate(*b, name, [&] { return boundary_tag_from_string(tag); });
        }
        if (const YAML::Node patches = b->take("patches")) {
            if (!patches.IsSequence()) Section::fail(b->key("patches"), patches, "expected a list");
            for (std::size_t i = 0; i < patches.size(); ++i) {
                Section p(patches[i], b->key("patches") + "[" + std::to_string(i) + "]");
                BoundaryPatch patch;
                const std::string side = p.text("side", "right");
                const std::string tag = p.text("tag", "dirichlet");
                patch.side = translate(p, "side", [&] { return side_from_string(side); });
                patch.tag = translate(p, "tag", [&] { return boundary_tag_from_string(tag); });
                patch.from = p.number("from", 0.0);
                patch.to = p.number("to", 0.0);
                p.finish();
                sc.boundary.patches.push_back(patch);
            }
        }
        sc.neumann_walls = b->flag("neumann_walls", sc.neumann_walls);
        b->finish();
    }
    if (auto v = root.child("velocity")) sc.velocity = parse_velocity(std::move(*v));
    if (auto r = root.child("reaction")) sc.reaction = parse_reaction(std::move(*r));
    if (auto i = root.child("initial")) sc.initial = parse_initial(std::move(*i));
    if (auto t = root.child("time")) {
        sc.time.horizon = t->number("horizon", sc.time.horizon);
        sc.time.dt_max = t->number("dt_max", sc.time.dt_max);
        sc.time.cadence = t->number("cadence", sc.time.cadence);
        if (!(sc.time.horizon > 0.0)) Section::fail(t->key("horizon"), t->node()["horizon"], "must be positive");
        if (sc.time.dt_max < 0.0 || sc.time.cadence < 0.0)
            Section::fail(t->path(), t->node(), "dt_max and cadence must be nonnegative");
        t->finish();
    }
    if (auto s = root.child("solver")) {
        sc.solver.tol = s->number("tol", sc.solver.tol);
        sc.solver.max_sweeps = s->count("max_sweeps", sc.solver.max_sweeps);
        sc.solver.admissibility_tol = s->number("admissibility_tol", sc.solver.admissibility_tol);
        sc.solver.pressure = s->flag("pressure", sc.solver.pressure);
        sc.solver.accelerate = s->flag("accelerate", sc.solver.accelerate);
        if (!(sc.solver.tol > 0.0)) Section::fail(s->key("tol"), s->node()["tol"], "must be positive");
        s->finish();
    }
    if (root.has("mode")) {
        const YAML::Node n = root.node()["mode"];
        const std::string mode = root.text("mode", "");
        if (mode == "one_phase") sc.mode = Phase::One;
        else if (mode == "two_phase") sc.mode = Phase::Two;
        else Section::fail("mode", n, "expected one_phase or two_phase, got '" + mode + "'");
    }
    sc.exploratory = root.flag("exploratory", sc.exploratory);
    root.finish();
    return sc;
}

std::string num(double v) { return format_number(v); }

void emit_numbers(YAML::Emitter& out, const std::vector<double>& values) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double v : values) out << num(v);
    out << YAML::EndSeq;
}

void emit_reaction(YAML::Emitter& out, const ReactionSpec& r) {
    out << YAML::BeginMap;
    out << YAML::Key << "type" << YAML::Value << r.type;
    if (r.type == "constant" || r.value != 0.0) out << YAML::Key << "value" << YAML::Value << num(r.value);
    out << YAML::Key << "alpha" << YAML::Value;
    emit_numbers(out, r.alpha);
    out << YAML::Key << "u_eq" << YAML::Value;
    emit_numbers(out, r.u_eq);
    if (!r.r.empty()) {
        out << YAML::Key << "r" << YAML::Value;
        emit_numbers(out, r.r);
    }
    if (!r.g.empty()) {
        out << YAML::Key << "g" << YAML::Value;
        emit_numbers(out, r.g);
    }
    if (r.lipschitz) out << YAML::Key << "lipschitz" << YAML::Value << num(*r.lipschitz);
    if (r.growth) {
        out << YAML::Key << "growth" << YAML::Value;
        if (r.growth->times.empty() && r.growth->values.size() == 1) {
            out << num(r.growth->values[0]);
        } else {
            out << YAML::BeginMap << YAML::Key << "times" << YAML::Value;
            emit_numbers(out, r.growth->times);
            out << YAML::Key << "values" << YAML::Value;
            emit_numbers(out, r.growth->values);
            out << YAML::EndMap;
        }
    }
    if (!r.parts.empty()) {
        out << YAML::Key << "parts" << YAML::Value << YAML::BeginSeq;
        for (const auto& p : r.parts) emit_reaction(out, p);
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
}

struct VelocityEmitter {
    YAML::Emitter& out;

    void vec(const char* key, Vec2 v) {
        out << YAML::Key << key << YAML::Value;
        emit_numbers(out, {v.x, v.y});
    }
    void operator()(const ConstantVelocity& v) { vec("value", v.value); }
    void operator()(const RadialVelocity& v) {
        vec("center", v.center);
        out << YAML::Key << "speed" << YAML::Value << num(v.speed);
    }
    void operator()(const AffineVelocity& v) {
        out << YAML::Key << "axx" << YAML::Value << num(v.axx);
        out << YAML::Key << "axy" << YAML::Value << num(v.axy);
        out << YAML::Key << "ayx" << YAML::Value << num(v.ayx);
        out << YAML::Key << "ayy" << YAML::Value << num(v.ayy);
        vec("offset", v.offset);
    }
    void operator()(const CellularVelocity& v) {
        out << YAML::Key << "amplitude" << YAML::Value << num(v.amplitude);
        out << YAML::Key << "modes_x" << YAML::Value << v.modes_x;
        out << YAML::Key << "modes_y" << YAML::Value << v.modes_y;
    }
    void operator()(const FaceTableVelocity& v) {
        out << YAML::Key << "values" << YAML::Value;
        emit_numbers(out, v.values);
    }
};

}  // namespace

Scenario parse_scenario(const std::string& text) {
    YAML::Node doc;
    try {
        doc = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ParseError("malformed scenario: " + e.msg + " (line " + std::to_string(e.mark.line + 1) + ")", "",
                         e.mark.line + 1);
    }
    if (doc.IsNull()) return Scenario{};
    if (doc.IsMap() && doc["scenario"] && doc["scenario"].IsMap()) return parse_root(Section(doc["scenario"], ""));
    return parse_root(Section(doc, ""));
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string scenario_to_yaml(const Scenario& sc) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << sc.name;

    out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "nx" << YAML::Value << sc.nx;
    out << YAML::Key << "ny" << YAML::Value << sc.ny;
    out << YAML::Key << "extent" << YAML::Value;
    emit_numbers(out, {sc.extent.xmin, sc.extent.ymin, sc.extent.xmax, sc.extent.ymax});
    out << YAML::EndMap;

    out << YAML::Key << "boundary" << YAML::Value << YAML::BeginMap;
    for (Side side : {Side::Left, Side::Right, Side::Bottom, Side::Top})
        out << YAML::Key << to_string(side) << YAML::Value << to_string(sc.boundary.side(side));
    if (!sc.boundary.patches.empty()) {
        out << YAML::Key << "patches" << YAML::Value << YAML::BeginSeq;
        for (const auto& p : sc.boundary.patches) {
            out << YAML::Flow << YAML::BeginMap;
            out << YAML::Key << "side" << YAML::Value << to_string(p.side);
            out << YAML::Key << "from" << YAML::Value << num(p.from);
            out << YAML::Key << "to" << YAML::Value << num(p.to);
            out << YAML::Key << "tag" << YAML::Value << to_string(p.tag);
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }
    out << YAML::Key << "neumann_walls" << YAML::Value << sc.neumann_walls;
    out << YAML::EndMap;

    out << YAML::Key << "velocity" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "type" << YAML::Value << velocity_name(sc.velocity);
    std::visit(VelocityEmitter{out}, sc.velocity);
    out << YAML::EndMap;

    out << YAML::Key << "reaction" << YAML::Value;
    emit_reaction(out, sc.reaction);

    const InitialSpec& init = sc.initial;
    out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "type" << YAML::Value << init.type;
    out << YAML::Key << "value" << YAML::Value << num(init.value);
    out << YAML::Key << "background" << YAML::Value << num(init.background);
    if (!init.values.empty()) {
        out << YAML::Key << "values" << YAML::Value;
        emit_numbers(out, init.values);
    }
    out << YAML::Key << "box" << YAML::Value;
    emit_numbers(out, {init.box.xmin, init.box.ymin, init.box.xmax, init.box.ymax});
    out << YAML::Key << "center" << YAML::Value;
    emit_numbers(out, {init.center.x, init.center.y});
    out << YAML::Key << "radius" << YAML::Value << num(init.radius);
    out << YAML::EndMap;

    out << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "horizon" << YAML::Value << num(sc.time.horizon);
    out << YAML::Key << "dt_max" << YAML::Value << num(sc.time.dt_max);
    out << YAML::Key << "cadence" << YAML::Value << num(sc.time.cadence);
    out << YAML::EndMap;

    out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "tol" << YAML::Value << num(sc.solver.tol);
    out << YAML::Key << "max_sweeps" << YAML::Value << sc.solver.max_sweeps;
    out << YAML::Key << "admissibility_tol" << YAML::Value << num(sc.solver.admissibility_tol);
    out << YAML::Key << "pressure" << YAML::Value << sc.solver.pressure;
    out << YAML::Key << "accelerate" << YAML::Value << sc.solver.accelerate;
    out << YAML::EndMap;

    out << YAML::Key << "mode" << YAML::Value << to_string(sc.mode);
    out << YAML::Key << "exploratory" << YAML::Value << sc.exploratory;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace crowdflow
