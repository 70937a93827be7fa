#include "epfano/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace epfano {

namespace {

constexpr std::array<std::string_view, 10> kKeys = {"omega1", "omega2", "k1",    "k2",    "g",
                                                    "f",      "c1_re",  "c1_im", "c2_re", "c2_im"};

}  // namespace

std::string format_number(double x)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

OscillatorParams params_from_json(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("parameter file must hold a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto k : kKeys) known = known || key == k;
        if (!known) throw SchemaError("unknown key '" + key + "'");
    }
    auto number = [&](std::string_view key) {
        const auto it = j.find(std::string(key));
        if (it == j.end()) throw SchemaError("missing key '" + std::string(key) + "'");
        if (!it->is_number()) throw SchemaError("key '" + std::string(key) + "' must be a number");
        return it->get<double>();
    };
    OscillatorParams p;
    p.omega1 = number("omega1");
    p.omega2 = number("omega2");
    p.k1 = number("k1");
    p.k2 = number("k2");
    p.g = number("g");
    p.f = number("f");
    p.c1 = {number("c1_re"), number("c1_im")};
    p.c2 = {number("c2_re"), number("c2_im")};
    return p;
}

OscillatorParams load_params(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read parameter file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return params_from_json(ss.str());
}

std::string params_to_json(const OscillatorParams& p)
{
    nlohmann::ordered_json j;
    j["omega1"] = p.omega1;
    j["omega2"] = p.omega2;
    j["k1"] = p.k1;
    j["k2"] = p.k2;
    j["g"] = p.g;
    j["f"] = p.f;
    j["c1_re"] = p.c1.real();
    j["c1_im"] = p.c1.imag();
    j["c2_re"] = p.c2.real();
    j["c2_im"] = p.c2.imag();
    return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot write '" + path.string() + "'");
    out << contents;
}

}  // namespace epfano
