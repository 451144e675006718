#include "compmdp/prism.hpp"

#include <cctype>
#include <sstream>

#include "compmdp/dsl.hpp"
#include "compmdp/error.hpp"

namespace compmdp {

namespace {

std::string identifier(const std::string& s) {
    std::string out;
    for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "a_" + out;
    return out;
}

}  // namespace

std::string export_prism(const RoMDP& a, std::size_t entrance) {
    if (entrance < 1 || entrance > a.entrances)
        throw ArityMismatch("entrance " + std::to_string(entrance) + " out of range");
    const std::size_t nq = a.num_positions();
    const std::size_t lost = nq + a.exits;
    auto state = [&](Target t) { return t.is_exit() ? nq + t.index - 1 : t.index; };

    std::ostringstream os;
    os << "// Flattened open MDP. Position states 0.." << (nq ? nq - 1 : 0) << ", exit j is state "
       << nq << "+j-1, state " << lost << " collects mass lost at dead ends.\n";
    os << "// Reward structure \"reward\" gives position rewards. PRISM's total expected reward\n"
          "// is not conditioned on the exit, so it matches the compositional r only for\n"
          "// single-exit models where every scheduler reaches the exit almost surely.\n";
    for (std::size_t q = 0; q < nq; ++q) os << "// state " << q << " = " << a.positions[q] << "\n";
    os << "mdp\n\nmodule flat\n";
    os << "  s : [0.." << lost << "] init " << state(a.entry[entrance - 1]) << ";\n";
    for (std::size_t q = 0; q < nq; ++q) {
        bool any = false;
        for (std::size_t ac = 0; ac < a.num_actions(); ++ac) {
            if (!a.enabled(q, ac)) continue;
            any = true;
            os << "  [" << identifier(a.actions[ac]) << "] s=" << q << " -> ";
            const Row& r = a.row(q, ac);
            for (std::size_t k = 0; k < r.size(); ++k)
                os << (k ? " + " : "") << format_real(r[k].prob) << ":(s'=" << state(r[k].to)
                   << ")";
            os << ";\n";
        }
        if (!any) os << "  [] s=" << q << " -> (s'=" << lost << ");\n";
    }
    for (std::size_t j = 0; j <= a.exits; ++j) {
        std::size_t s = nq + j;
        os << "  [] s=" << s << " -> (s'=" << s << ");\n";
    }
    os << "endmodule\n\nrewards \"reward\"\n";
    for (std::size_t q = 0; q < nq; ++q)
        if (a.rewards[q] != 0.0) os << "  s=" << q << " : " << format_real(a.rewards[q]) << ";\n";
    os << "endrewards\n\n";
    for (std::size_t j = 1; j <= a.exits; ++j)
        os << "label \"exit_" << j << "\" = s=" << (nq + j - 1) << ";\n";
    os << "label \"lost\" = s=" << lost << ";\n";
    return os.str();
}

}  // namespace compmdp
