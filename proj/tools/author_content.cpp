#include "author_content.hpp"

#include <sstream>

namespace author {

namespace {

const std::string kMobile = "mobile_v1";
const std::string kQuad = "quadruped_v1";

std::string num(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}
std::string deg(double v) { return num(v) + "deg"; }
std::string m(double v) { return num(v) + "m"; }
std::string s(double v) { return num(v) + "s"; }

struct Skill {
    std::string name;
    std::string params;
    std::string doc;
    std::vector<std::string> body;
};

std::string render(const std::vector<Skill>& skills) {
    std::string out;
    for (const auto& sk : skills) {
        if (!out.empty()) out += "\n";
        out += "skill " + sk.name + "(" + sk.params + ") {\n";
        if (!sk.doc.empty()) out += "    \"\"\"" + sk.doc + "\"\"\"\n";
        for (const auto& line : sk.body) out += "    " + line + "\n";
        out += "}\n";
    }
    return out;
}

std::vector<std::string> indent(const std::vector<std::string>& lines) {
    std::vector<std::string> out;
    for (const auto& l : lines) out.push_back("    " + l);
    return out;
}

std::vector<std::string> block(const std::string& head, const std::vector<std::string>& body) {
    std::vector<std::string> out{head + " {"};
    for (const auto& l : indent(body)) out.push_back(l);
    out.push_back("}");
    return out;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& lines) { to.insert(to.end(), lines.begin(), lines.end()); }

std::string human(const std::string& cot, const std::string& exp) { return "REASONING: " + cot + "\nANSWER: " + exp; }

std::string plan(const std::string& cot, const std::vector<std::string>& steps) {
    std::string out = "REASONING: " + cot + "\nANSWER:\n";
    for (std::size_t i = 0; i < steps.size(); ++i) out += std::to_string(i + 1) + ". " + steps[i] + "\n";
    return out;
}

std::string code(const std::string& cot, const std::string& src) {
    return "REASONING: " + cot + "\nANSWER:\n```ebl\n" + src + "```";
}

std::string feedback(const std::string& cot, const std::string& change, const std::string& route) {
    return "REASONING: " + cot + "\nANSWER: " + change + "\nROUTE: " + route;
}

// Raw single-call output for the ablation: code only, usually no reasoning.
std::string bare(const std::string& src) { return "```ebl\n" + src + "```"; }

template <typename T>
T pick(const std::vector<T>& v, int k) {
    return v[static_cast<std::size_t>(k) % v.size()];
}

Gens one(std::function<std::string(int)> f) {
    return [f](int k) { return std::vector<std::string>{f(k)}; };
}

// ---- shared mobile skills --------------------------------------------------

Skill nod_once_skill() {
    return {"nod_once", "depth: angle = 15deg", "Tilt the head down and back up once.",
            {"head_tilt(angle_deg=depth)", "head_tilt(angle_deg=0deg)"}};
}

// ---- Nod -------------------------------------------------------------------

const std::string kNod = "Nod your head.";

std::string nod_code(int k) {
    const double d = pick<double>({15, 18, 20, 15, 12}, k);
    const int r = pick<int>({1, 2, 2, 3, 2}, k);
    std::vector<std::string> body;
    if (r == 1) body.push_back("nod_once(depth=" + deg(d) + ")");
    else append(body, block("repeat " + std::to_string(r), {"nod_once(depth=" + deg(d) + ")"}));
    return render({nod_once_skill(), {"nod_yes", "", "Nod to signal agreement.", body}});
}

// Rounds of the scripted Nod session, cumulative.
struct NodState {
    double depth = 15;
    int times = 1;
    std::string color;  // empty: no lights
    double pause = 0;   // inside each nod
    bool look_ahead = false;
    bool rest = false;
    bool chime = false;
    bool lights_off = false;
};

std::string nod_session_code(const NodState& st) {
    Skill nod = nod_once_skill();
    if (st.pause > 0) {
        nod.params = "depth: angle = 15deg, pause: duration = 0.3s";
        nod.body = {"head_tilt(angle_deg=depth)", "wait pause", "head_tilt(angle_deg=0deg)"};
    }
    const std::string call =
        "nod_once(depth=" + deg(st.depth) + (st.pause > 0 ? ", pause=" + s(st.pause) : "") + ")";
    std::vector<std::string> body;
    if (st.chime) body.push_back("play_sound(sound=\"chime\")");
    if (st.look_ahead) body.push_back("head_pan(angle_deg=0deg)");
    if (!st.color.empty()) body.push_back("light_pattern(pattern=\"blink\", color=" + st.color + ", times=2)");
    if (st.times == 1) body.push_back(call);
    else append(body, block("repeat " + std::to_string(st.times), {call}));
    if (st.rest) body.push_back("wait 1s");
    if (st.lights_off) body.push_back("light_off()");
    return render({nod, {"nod_yes", "", "Nod to signal agreement.", body}});
}

std::vector<std::string> nod_session_steps(const NodState& st) {
    std::vector<std::string> steps;
    if (st.chime) steps.push_back("Play a short chime.");
    if (st.look_ahead) steps.push_back("Turn the head to face straight ahead.");
    if (!st.color.empty()) steps.push_back("Blink the light strip while nodding.");
    steps.push_back("Tilt the head down by about " + num(st.depth) + " degrees and back up, " +
                    (st.times == 1 ? std::string("once.") : std::to_string(st.times) + " times."));
    if (st.rest) steps.push_back("Hold still for a moment.");
    if (st.lights_off) steps.push_back("Switch the light strip off.");
    return steps;
}

// ---- Shake -----------------------------------------------------------------

const std::string kShake = "Shake your head.";

std::string shake_code(int k) {
    const double a = pick<double>({20, 25, 20, 30, 15}, k);
    const int r = pick<int>({2, 2, 3, 2, 2}, k);
    Skill once{"shake_once", "left: angle = 20deg, right: angle = -20deg", "Turn the head to one side and then the other.",
               {"head_pan(angle_deg=left)", "head_pan(angle_deg=right)"}};
    std::vector<std::string> body = block("repeat " + std::to_string(r), {"shake_once(left=" + deg(a) + ", right=" + deg(-a) + ")"});
    body.push_back("head_pan(angle_deg=0deg)");
    return render({once, {"shake_no", "", "Shake the head to signal no.", body}});
}

// ---- Wake ------------------------------------------------------------------

const std::string kWake = "You were asleep and have just woken up. Show it.";

std::string wake_code(int k, const std::string& pattern = "pulse") {
    const double droop = pick<double>({25, 20, 25, 30, 25}, k);
    return render({{"wake_up", "", "Come out of sleep: lift the head, look around and light up.",
                    {"head_tilt(angle_deg=" + deg(droop) + ")", "wait 1s", "head_tilt(angle_deg=0deg)",
                     "light_pattern(pattern=\"" + pattern + "\", color=#FFFFFF, times=2)", "head_pan(angle_deg=-30deg)",
                     "head_pan(angle_deg=30deg)", "head_pan(angle_deg=0deg)", "play_sound(sound=\"chime\")"}}});
}

// ---- Excuse ----------------------------------------------------------------

const std::string kExcuse = "A person is standing in your way in a narrow corridor. Ask them to let you pass.";

enum class Mod { None, Insert, InsertLate, Swap, Loop, LoopParam, Remove, RemoveUndefined, Ignore };

std::string excuse_code(int k, Mod mod = Mod::None) {
    const double w = pick<double>({4, 4, 3.5, 4, 4.5}, k);
    const std::string color = pick<std::string>({"#FFA500", "#FFA500", "#FFFF00", "#FFA500", "#FF8800"}, k);
    const double dist = pick<double>({3, 2.5, 3, 3, 3.5}, k);
    const std::string phrase = pick<std::string>({"Excuse me, could I get past?", "Excuse me, may I pass?",
                                                  "Excuse me, please.", "Pardon me, could I get through?",
                                                  "Excuse me, coming through."},
                                                 k);
    const std::string light = "light_pattern(pattern=\"blink\", color=" + color + ", times=2)";
    const auto ask = block("if person_distance_lt(distance_m=" + m(dist) + ")", {"say(text=\"" + phrase + "\")", "wait 2s"});
    std::vector<std::string> body{"wait " + s(w)};
    switch (mod) {
        case Mod::Insert: body.push_back("play_sound(sound=\"chime\")"); [[fallthrough]];
        case Mod::None:
        case Mod::Ignore: body.push_back(light); append(body, ask); break;
        case Mod::InsertLate: body.push_back(light); body.push_back("play_sound(sound=\"chime\")"); append(body, ask); break;
        case Mod::Swap: append(body, ask); body.push_back(light); break;
        case Mod::Loop: append(body, block("repeat 3", {light})); append(body, ask); break;
        case Mod::Remove:
        case Mod::RemoveUndefined:
        case Mod::LoopParam: body.push_back("play_sound(sound=\"beep\")"); append(body, ask); break;
    }
    body.push_back("base_translate(distance_m=0.5m)");
    return render({{"excuse_me", "", "Ask a person blocking the corridor to make way.", body}});
}

// ---- Recoverable / Unrecoverable -------------------------------------------

const std::string kRecoverable = "You made a mistake that can still be fixed. Show that you noticed it and are recovering.";
const std::string kUnrecoverable = "You made a mistake that cannot be undone. Show that you are sorry.";

std::string recoverable_code(int k) {
    const int blinks = pick<int>({3, 2, 3, 3, 2}, k);
    const std::string sound = pick<std::string>({"boop", "boop", "beep", "boop", "sigh"}, k);
    return render({{"signal_error", "color: color = #FF0000, times: count = 3", "Flash a color to show that something went wrong.",
                    {"light_pattern(pattern=\"blink\", color=color, times=times)"}},
                   {"recoverable_mistake", "", "Notice a mistake, show it, and get back on track.",
                    {"head_tilt(angle_deg=20deg)", "signal_error(color=#FF0000, times=" + std::to_string(blinks) + ")",
                     "play_sound(sound=\"" + sound + "\")", "head_tilt(angle_deg=0deg)", "light_set(color=#00FF00)", "wait 1s",
                     "light_off()"}}});
}

std::string unrecoverable_code(int k) {
    const double droop = pick<double>({25, 25, 20, 30, 25}, k);
    const std::string line = pick<std::string>({"I am sorry, I cannot undo that.", "I am so sorry.",
                                                "I am sorry. That cannot be fixed.", "I apologize.",
                                                "I am sorry, that was my fault."},
                                               k);
    return render({{"unrecoverable_mistake", "", "Show regret for a mistake that cannot be undone.",
                    {"head_tilt(angle_deg=" + deg(droop) + ")", "light_pattern(pattern=\"pulse\", color=#FF0000, times=2)",
                     "play_sound(sound=\"sigh\")", "say(text=\"" + line + "\")", "wait 2s"}}});
}

// ---- Acknowledge / Follow / Approach / Attention ----------------------------

const std::string kAcknowledge = "Acknowledge a person walking by. You cannot speak.";
const std::string kFollow = "Follow the person who is walking past you.";
const std::string kApproach = "Respond to a person saying, \"Come here.\" You cannot speak.";
const std::string kAttention = "A person is talking to you. Show that you are paying attention to them.";

std::string acknowledge_code(int k) {
    const double pan = pick<double>({-25, -30, -20, -25, -30}, k);
    return render({{"look_at", "angle: angle = 0deg", "Turn the head to look in a direction.", {"head_pan(angle_deg=angle)"}},
                   nod_once_skill(),
                   {"acknowledge_person", "", "Acknowledge a person walking by with eye contact and a nod, without speaking.",
                    [&] {
                        std::vector<std::string> b{"wait 3s"};
                        append(b, block("if person_visible()", {"look_at(angle=" + deg(pan) + ")", "nod_once(depth=15deg)",
                                                                "look_at(angle=0deg)"}));
                        b.push_back("light_pattern(pattern=\"pulse\", color=#00AAFF, times=1)");
                        return b;
                    }()}});
}

std::string follow_code(int k) {
    const double y = pick<double>({1.5, 1, 1.5, 2, 1}, k);
    std::vector<std::string> body{"light_set(color=#0000FF)", "wait 2s"};
    append(body, block("if person_visible()", {"navigate_to(x_m=1.2m, y_m=-0.5m)", "navigate_to(x_m=1.2m, y_m=" + m(y) + ")"}));
    body.push_back("light_off()");
    return render({{"follow_person", "", "Follow the person at a respectful distance.", body}});
}

std::string approach_code(int k, Mod mod = Mod::None) {
    const double depth = pick<double>({15, 15, 12, 18, 15}, k);
    const double x = pick<double>({2.2, 2.3, 2.2, 2, 3}, k);
    const double w = pick<double>({4, 4, 4.5, 4, 4}, k);
    const std::string color = pick<std::string>({"#00FF00", "#00FF00", "#00CC66", "#00FF00", "#33FF33"}, k);
    const std::string nod = "nod_once(depth=" + deg(depth) + ")";
    const std::string go = "navigate_to(x_m=" + m(x) + ", y_m=0m)";
    const std::string on = "light_set(color=" + color + ")";
    std::vector<std::string> body{"wait " + s(w)};
    switch (mod) {
        case Mod::None:
        case Mod::Ignore: body.insert(body.end(), {nod, on, go, "light_off()"}); break;
        case Mod::Insert: body.insert(body.end(), {nod, on, "play_sound(sound=\"chime\")", go, "light_off()"}); break;
        case Mod::Swap: body.insert(body.end(), {nod, go, on, "light_off()"}); break;
        case Mod::Loop:
            append(body, block("repeat 2", {nod}));
            body.insert(body.end(), {on, go, "light_off()"});
            break;
        case Mod::Remove: body.insert(body.end(), {nod, go}); break;
        case Mod::RemoveUndefined: body.insert(body.end(), {nod, "show_arrival()", go}); break;
        default: break;
    }
    return render({nod_once_skill(), {"come_over", "", "Walk over to a person who called, stopping at a polite distance.", body}});
}

std::string attention_code(int k) {
    const int nods = pick<int>({3, 3, 2, 3, 4}, k);
    return render({{"listen_nod", "", "Give a small nod while listening.", {"head_tilt(angle_deg=10deg)", "head_tilt(angle_deg=0deg)"}},
                   {"pay_attention", "", "Face the person and show active listening.",
                    [&] {
                        std::vector<std::string> b{"head_pan(angle_deg=11deg)", "light_set(color=#FFFFFF)"};
                        append(b, block("repeat " + std::to_string(nods), {"wait 1s", "listen_nod()"}));
                        b.push_back("light_off()");
                        return b;
                    }()}});
}

// ---- Acknowledge Stop (feedback suite only) ----------------------------------

const std::string kAckStop = "Acknowledge a person who stops next to you. You cannot speak.";

std::string ack_stop_code(int k, Mod mod = Mod::None) {
    const double tilt = pick<double>({10, 10, 8, 12, 10}, k);
    const std::string color = pick<std::string>({"#00AAFF", "#00AAFF", "#0088FF", "#00AAFF", "#33BBFF"}, k);
    const double w = pick<double>({4, 4, 4, 3.5, 4}, k);
    const std::string look = "head_tilt(angle_deg=" + deg(tilt) + ")";
    const std::string pulse = "light_pattern(pattern=\"pulse\", color=" + color + ", times=1)";
    std::vector<std::string> body{"wait " + s(w)};
    std::vector<Skill> skills;
    switch (mod) {
        case Mod::None:
        case Mod::Ignore: body.insert(body.end(), {look, pulse}); break;
        case Mod::Insert:
            skills.push_back(nod_once_skill());
            body.insert(body.end(), {"nod_once(depth=15deg)", look, pulse});
            break;
        case Mod::Swap: body.insert(body.end(), {pulse, look}); break;
        case Mod::Loop: body.push_back(look); append(body, block("repeat 2", {pulse})); break;
        case Mod::LoopParam:
            body.insert(body.end(), {look, "light_pattern(pattern=\"pulse\", color=" + color + ", times=2)"});
            break;
        case Mod::Remove: body.insert(body.end(), {look, "head_tilt(angle_deg=15deg)"}); break;
        case Mod::RemoveUndefined: body.insert(body.end(), {look, "glow_softly()"}); break;
        default: break;
    }
    body.push_back("head_tilt(angle_deg=0deg)");
    skills.push_back({"acknowledge_stop", "", "Greet a person who stopped nearby, without speaking.", body});
    return render(skills);
}

// ---- quadruped ---------------------------------------------------------------

std::string q_nod(int k) {
    const double d = pick<double>({12, 15, 10, 12, 14}, k);
    const int r = pick<int>({2, 2, 3, 1, 2}, k);
    return render({{"body_nod", "depth: angle = 12deg", "Dip the front of the body and come back up.",
                    {"body_pose(pitch_deg=depth)", "body_pose(pitch_deg=0deg)"}},
                   {"nod_yes", "", "Nod with the whole body to signal agreement.",
                    block("repeat " + std::to_string(r), {"body_nod(depth=" + deg(d) + ")"})}});
}

std::string q_shake(int k) {
    const double a = pick<double>({15, 20, 15, 18, 12}, k);
    std::vector<std::string> body = block("repeat 2", {"body_pose(yaw_deg=" + deg(a) + ")", "body_pose(yaw_deg=" + deg(-a) + ")"});
    body.push_back("body_pose(yaw_deg=0deg)");
    return render({{"shake_no", "", "Sway the body left and right to signal no.", body}});
}

std::string q_wake(int k) {
    const double w = pick<double>({1, 1.5, 1, 1, 2}, k);
    return render({{"wake_up", "", "Get up from lying down, stretch and light up.",
                    {"sit()", "wait " + s(w), "stand()", "light_pattern(pattern=\"pulse\", color=#FFFFFF, times=2)",
                     "body_pose(yaw_deg=15deg)", "body_pose(yaw_deg=-15deg)", "body_pose()"}}});
}

std::string q_excuse(int k) {
    std::vector<std::string> signal{"light_pattern(pattern=\"blink\", color=#FFA500, times=3)", "body_pose(pitch_deg=10deg)",
                                    "body_pose(pitch_deg=0deg)"};
    if (k == 1 || k == 3) signal.insert(signal.begin(), "say(text=\"Excuse me\")");
    std::vector<std::string> body{"wait 4s"};
    append(body, block("if person_distance_lt(distance_m=3m)", signal));
    body.insert(body.end(), {"base_rotate(angle_deg=30deg)", "base_translate(distance_m=0.5m)"});
    return render({{"excuse_me", "", "Signal to a person in the way that the robot needs to pass.", body}});
}

std::string q_recoverable(int k) {
    const double turn = pick<double>({60, 45, 60, 90, 60}, k);
    return render({{"show_regret", "turn: angle = 60deg", "Turn away, lower the body and flash red.",
                    {"base_rotate(angle_deg=turn)", "body_height(height_m=0.3m)",
                     "light_pattern(pattern=\"blink\", color=#FF0000, times=3)"}},
                   {"recover", "", "Come back up and confirm with a green light.",
                    {"body_height(height_m=0.5m)", "light_set(color=#00FF00)", "wait 1s"}},
                   {"recoverable_mistake", "", "Own up to a mistake that can be fixed, then recover.",
                    {"show_regret(turn=" + deg(turn) + ")", "wait 0.5s", "base_rotate(angle_deg=" + deg(-turn) + ")", "recover()"}}});
}

std::string q_unrecoverable(int k) {
    const double p = pick<double>({20, 18, 40, 15, 20}, k);
    return render({{"unrecoverable_mistake", "", "Show regret for a mistake that cannot be undone.",
                    {"body_height(height_m=0.3m)", "light_pattern(pattern=\"pulse\", color=#FF0000, times=2)",
                     "bow(pitch_deg=" + deg(p) + ")", "wait 3s"}}});
}

std::string q_acknowledge(int k) {
    std::vector<std::string> inner{"body_pose(yaw_deg=-20deg)"};
    if (k == 3) inner.push_back("head_tilt(angle_deg=10deg)");
    else inner.insert(inner.end(), {"body_pose(pitch_deg=10deg, yaw_deg=-20deg)", "body_pose(pitch_deg=0deg, yaw_deg=-20deg)"});
    std::vector<std::string> body{"wait 3s"};
    append(body, block("if person_visible()", inner));
    body.push_back("light_pattern(pattern=\"pulse\", color=#00AAFF, times=1)");
    return render({{"acknowledge_person", "", "Turn towards a passer-by and dip the body in greeting.", body}});
}

std::string q_follow(int k) {
    std::vector<std::string> body{"light_set(color=#0000FF)", "wait 2s"};
    if (k == 1 || k == 2) append(body, block("repeat 4", {"base_translate(distance_m=2m)"}));
    else if (k == 4) body.push_back("navigate_to(x_m=\"person\", y_m=0m)");
    else body.insert(body.end(), {"navigate_to(x_m=1.2m, y_m=-0.5m)", "navigate_to(x_m=1.2m, y_m=1.5m)"});
    body.push_back("light_off()");
    return render({{"follow_person", "", "Walk after the person.", body}});
}

std::string q_approach(int k) {
    const double x = pick<double>({3, 3, 2.9, 3, 3.1}, k);
    return render({{"come_over", "", "Walk over to the person who called.",
                    {"wait 4s", "light_pattern(pattern=\"blink\", color=#00FF00, times=1)", "navigate_to(x_m=" + m(x) + ", y_m=0m)"}}});
}

std::string q_attention(int k) {
    std::string turn = "base_rotate(angle_deg=11deg)";
    if (k == 1) turn = "base_rotate(angle_deg=\"person\")";
    if (k == 2) turn = "look_at()";
    if (k == 3) turn = "head_pan(angle_deg=11deg)";
    std::vector<std::string> body{turn, "light_set(color=#FFFFFF)"};
    const std::string dip = k == 4 ? "body_pose(pitch_deg=40deg)" : "body_pose(pitch_deg=8deg)";
    append(body, block("repeat 3", {"wait 1s", dip, "body_pose(pitch_deg=0deg)"}));
    body.push_back("light_off()");
    return render({{"pay_attention", "", "Face the person and dip the body now and then while listening.", body}});
}

// ---- composition targets (quadruped, seed skills in the prompt) ---------------

const std::string kComposeAck = "Acknowledge the person walking past you.";
const std::string kComposeApproach = "Walk over to the person who called you.";
const std::string kComposeConfusion = "Show that you are confused.";

std::string c_ack(int k) {
    const double turn = pick<double>({-25, -30, -20, -25, -30}, k);
    return render({{"acknowledge_walker", "", "Face a passer-by, make eye contact and nod.",
                    {"wait 3s", "base_rotate(angle_deg=" + deg(turn) + ")", "eye_contact(hold=" + s(pick<double>({1, 1, 0.5, 1, 1.5}, k)) + ")",
                     "nod_head()", "base_rotate(angle_deg=" + deg(-turn) + ")"}}});
}

std::string c_approach(int k) {
    std::vector<std::string> body{"wait 4s"};
    if (k != 3) body.push_back("eye_contact(hold=0.5s)");
    body.insert(body.end(), {"blink_lights(color=#00FF00, times=" + std::to_string(pick<int>({2, 2, 3, 2, 1}, k)) + ")",
                             "navigate_to(x_m=" + m(pick<double>({2.2, 2.2, 2.3, 2.1, 2.2}, k)) + ", y_m=0m)"});
    return render({{"come_over", "", "Acknowledge the call, signal with the lights and walk over.", body}});
}

std::string c_confusion(int k) {
    std::vector<std::string> body;
    if (k == 0) body.push_back("look_around(pause=0.5s)");
    else body.insert(body.end(), {"body_pose(yaw_deg=20deg)", "wait 0.3s", "body_pose(yaw_deg=-20deg)", "wait 0.3s", "body_pose()"});
    body.push_back("shake_head()");
    if (k == 2) body.push_back("light_set(color=#FFFF00)");
    else body.push_back("blink_lights(color=#FFFF00, times=2)");
    body.push_back("body_pose(roll_deg=10deg)");
    body.push_back("wait 1s");
    body.push_back("body_pose()");
    return render({{"show_confusion", "", "Look around, shake the body and tilt it as if puzzled.", body}});
}

// ---- ablation (single call, mobile) -----------------------------------------

std::string ab_nod(int k) {
    const double d = pick<double>({20, 15, 20, 25, 15}, k);
    return bare(render({{"nod", "", "", {"head_tilt(" + deg(d) + ")", "head_tilt(0deg)", "head_tilt(" + deg(d) + ")", "head_tilt(0deg)"}}}));
}

std::string ab_shake(int k) {
    const double a = pick<double>({30, 25, 30, 20, 30}, k);
    return bare(render({{"shake", "", k == 2 ? "Shake head." : "",
                         {"head_pan(angle_deg=" + deg(a) + ")", "head_pan(angle_deg=" + deg(-a) + ")", "head_pan(angle_deg=0deg)"}}}));
}

std::string ab_wake(int k) {
    std::string light = "light_set(color=#FFFFFF)";
    if (k == 1) light = "light_set(color=\"white\")";
    std::string sound = "play_sound(sound=\"chime\")";
    if (k == 3) sound = "play_sound(sound=\"alarm\")";
    return bare(render({{"wake", "", "", {"head_tilt(angle_deg=0deg)", light, sound, "wait 1s", "light_off()"}}}));
}

std::string ab_excuse(int k) {
    std::vector<std::string> body;
    switch (k) {
        case 0: body = {"say(text=\"Excuse me\")", "move_forward(distance_m=1m)"}; break;
        case 1: body = {"say(text=\"Excuse me\")", "base_translate(distance_m=\"forward\")"}; break;
        case 2: body = {"say(text=\"Excuse me, please move\")", "wait_for_person()", "base_translate(distance_m=1m)"}; break;
        case 3: body = {"light_set(color=\"red\")", "say(text=\"Excuse me\")", "base_translate(distance_m=1m)"}; break;
        default: body = {"beep()", "say(text=\"Excuse me\")", "base_translate(1m)"}; break;
    }
    return bare(render({{"excuse", "", "", body}}));
}

std::string ab_recoverable(int k) {
    return bare(render({{"mistake", "", "",
                         {"light_pattern(pattern=\"blink\", color=#FF0000, times=" + std::to_string(pick<int>({2, 3, 2, 2, 3}, k)) + ")",
                          "say(text=\"Oops\")", "light_set(color=#00FF00)", "wait 1s", "light_off()"}}}));
}

std::string ab_unrecoverable(int k) {
    return bare(render({{"sorry", "", k == 4 ? "Apologize." : "",
                         {"head_tilt(angle_deg=20deg)", "light_set(color=#FF0000)", "say(text=\"I am sorry\")", "wait 2s"}}}));
}

std::string ab_acknowledge(int k) {
    return bare(render({{"acknowledge", "", "",
                         {"wait 3s", "head_pan(angle_deg=" + deg(pick<double>({-25, -20, -30, -25, -20}, k)) + ")",
                          "light_pattern(pattern=\"blink\", color=#00FF00, times=1)", "head_pan(angle_deg=0deg)"}}}));
}

std::string ab_follow(int k) {
    std::vector<std::string> body;
    switch (k) {
        case 0: body = {"follow(target=\"person\")"}; break;
        case 1: body = {"track_person()", "navigate_to(x_m=\"person\", y_m=0m)"}; break;
        case 2: body = {"find_person()", "base_translate(distance_m=\"person\")"}; break;
        case 3: body = {"follow_person(distance_m=1m)"}; break;
        default: body = {"get_person_position()", "navigate_to(x_m=1m, y_m=1m)"}; break;
    }
    return bare(render({{"follow_them", "", "", body}}));
}

std::string ab_approach(int k) {
    std::vector<std::string> body{"wait 4s"};
    if (k == 1 || k == 3) body.push_back("light_set(color=#00FF00)");
    body.push_back("navigate_to(x_m=" + m(pick<double>({3, 2.2, 3, 2.3, 3}, k)) + ", y_m=0m)");
    return bare(render({{"approach", "", "", body}}));
}

std::string ab_attention(int k) {
    std::vector<std::string> body;
    switch (k) {
        case 0: body = {"head_pan(angle_deg=11deg)", "light_set(color=#FFFFFF)", "wait 3s", "light_off()"}; break;
        case 1: body = {"look_at_person()", "light_set(color=#FFFFFF)", "light_off()"}; break;
        case 2: body = {"head_pan(angle_deg=\"person\")", "light_set(color=#FFFFFF)", "light_off()"}; break;
        case 3: body = {"head_pan(angle_deg=11deg)", "turn_on_lights()", "wait 3s"}; break;
        default: body = {"head_pan(angle_deg=11deg)", "light_set(color=255)", "light_off()"}; break;
    }
    return bare(render({{"attention", "", "", body}}));
}

// ---- stage 1 and 2 text --------------------------------------------------------

Gen fixed(const std::string& text) {
    return [text](int) { return text; };
}

}  // namespace

Content build_content() {
    Content c;

    // Stage 1 is embodiment independent.
    c.human[kNod] = fixed(human("Nodding is the usual way to show agreement or that you are listening.",
                                "Tilt the head down and bring it back up."));
    c.human[kShake] = fixed(human("Shaking the head is a common way to say no or show disagreement.",
                                  "Turn the head to one side, then to the other, and back to the middle."));
    c.human[kWake] = fixed(human("Someone who just woke up lifts their head slowly, stretches and looks around.",
                                 "Lift the head, stretch, look around, and show you are alert."));
    c.human[kExcuse] = fixed(human("When someone blocks a corridor it is polite to get their attention and ask to pass, once they "
                                   "are close enough to hear.",
                                   "When the person is close, say \"excuse me\" and wait for them to step aside, then pass."));
    c.human[kRecoverable] = fixed(human("Noticing a small mistake, people look down briefly, show they realize it, and then "
                                        "fix it and carry on.",
                                        "Look down for a moment, signal that something went wrong, then straighten up and "
                                        "continue, showing things are fine again."));
    c.human[kUnrecoverable] = fixed(human("When a mistake cannot be fixed, people lower their head and apologize.",
                                          "Lower the head, apologize and stay still for a moment."));
    c.human[kAcknowledge] = [](int k) {
        if (k == 0)
            return human("The person is passing by and it's polite to acknowledge their presence. Since I cannot speak, I "
                         "need to use non-verbal communication. A nod or a smile is a universal sign of acknowledgement.",
                         "Make eye contact with the person. Smile or nod to acknowledge their presence.");
        return human("Someone walking by should be acknowledged without words, since speaking is not allowed.",
                     "Look at the person and give a small nod.");
    };
    c.human[kFollow] = fixed(human("Following someone means keeping them in view and walking after them without getting "
                                   "too close.",
                                   "Watch the person and walk after them, keeping a comfortable distance."));
    c.human[kApproach] = fixed(human("The person is calling me over and I cannot speak, so I should show I heard them and "
                                     "walk over, stopping at a comfortable distance.",
                                     "Nod to show you heard them, then walk towards them and stop an arm's length away."));
    c.human[kAttention] = fixed(human("A good listener faces the speaker and nods from time to time.",
                                      "Turn to face the person, keep looking at them and nod now and then."));
    c.human[kAckStop] = fixed(human("A person stopped nearby; without speaking, a friendly look and a small signal make them "
                                    "feel noticed.",
                                    "Look up at the person and give a friendly signal."));
    c.human[kComposeAck] = fixed(human("Acknowledging someone who walks past is usually eye contact and a nod.",
                                       "Look at the person and nod."));
    c.human[kComposeApproach] = fixed(human("When called, people look at the caller, signal they are coming, and walk over.",
                                            "Look at the person, signal that you are coming, and walk over to them."));
    c.human[kComposeConfusion] = fixed(human("Confused people look around, shake their head and tilt it.",
                                             "Look around, shake your head and tilt it to the side."));

    // ---- mobile, modular ----
    const auto mobile = [&](const std::string& instr, Gen p, Gens code) { c.scripts[{kMobile, instr}] = {std::move(p), std::move(code)}; };
    mobile(kNod,
           [](int k) {
               return plan("The head tilt is the robot's equivalent of a nod.",
                           {"Tilt the head down by about " + num(pick<double>({15, 18, 20, 15, 12}, k)) + " degrees.",
                            "Tilt the head back to neutral.",
                            "Repeat " + std::to_string(pick<int>({1, 2, 2, 3, 2}, k)) + " time(s) in total."});
           },
           one([](int k) { return code("A reusable single nod, repeated by the entry skill.", nod_code(k)); }));
    mobile(kShake,
           fixed(plan("Head pan gives a side-to-side shake.",
                      {"Pan the head to one side.", "Pan the head to the other side.", "Repeat a few times.",
                       "Return the head to the middle."})),
           one([](int k) { return code("One shake as a helper, repeated.", shake_code(k)); }));
    mobile(kWake,
           fixed(plan("The head can droop and rise; lights and a chime signal being awake.",
                      {"Start with the head drooping down.", "Raise the head slowly.", "Pulse the light strip white.",
                       "Look left and right.", "Play a chime."})),
           [](int k) {
               if (k == 2)
                   return std::vector<std::string>{
                       code("Wake sequence.", wake_code(k, "glow")),
                       code("The light pattern must be one of blink, pulse or chase.", wake_code(k))};
               return std::vector<std::string>{code("Wake sequence.", wake_code(k))};
           });
    mobile(kExcuse,
           fixed(plan("The robot can blink its lights to get attention, check the person's distance and speak.",
                      {"Wait for the person to come to a stop.", "Blink the light strip to draw attention.",
                       "If the person is close, say excuse me and give them a moment.", "Move forward."})),
           one([](int k) { return code("Distance check guards the spoken request.", excuse_code(k)); }));
    mobile(kRecoverable,
           fixed(plan("Head tilt, red then green light and a sound convey noticing and fixing a mistake.",
                      {"Tilt the head down.", "Blink the light strip red.", "Play a short sound.", "Raise the head.",
                       "Show a green light, then turn it off."})),
           one([](int k) { return code("A helper flashes the error color.", recoverable_code(k)); }));
    mobile(kUnrecoverable,
           fixed(plan("Lowered head, red light and an apology convey regret.",
                      {"Lower the head.", "Pulse the light strip red.", "Play a sigh.", "Apologize.", "Stay still."})),
           one([](int k) { return code("Straight sequence.", unrecoverable_code(k)); }));
    mobile(kAcknowledge,
           [](int k) {
               if (k == 0)
                   return plan("The robot cannot smile but can turn its head and nod.",
                               {"Wait until the person is in view.",
                                "Use the head's pan and tilt capabilities to face the person.",
                                "Nod the head once.", "Return the head to the front.", "Pulse the light strip softly."});
               return plan("Head pan for eye contact, tilt for the nod.",
                           {"Wait until the person is in view.", "Pan the head towards the person.", "Nod once.",
                            "Look ahead again.", "Pulse the light strip."});
           },
           one([](int k) { return code("Looking and nodding are separate helpers.", acknowledge_code(k)); }));
    mobile(kFollow,
           fixed(plan("The base can navigate to points behind the person.",
                      {"Turn the light strip blue.", "Wait for the person to pass.", "If the person is visible, move behind them.",
                       "Keep following along their path.", "Turn the light off."})),
           one([](int k) { return code("Navigate to two points along the person's path.", follow_code(k)); }));
    mobile(kApproach,
           fixed(plan("Nod with the head tilt, show a light, then navigate close to the person but not onto them.",
                      {"Wait until the person has called.", "Nod once.", "Turn the light strip green.",
                       "Navigate towards the person, stopping short of them.", "Turn the light off."})),
           one([](int k) { return code("Nod helper, then light and navigation.", approach_code(k)); }));
    mobile(kAttention,
           fixed(plan("Head pan faces the speaker; small head tilts act as listening nods.",
                      {"Pan the head towards the person.", "Turn the light strip on.", "Nod slightly every second.",
                       "Turn the light off."})),
           one([](int k) { return code("A small listening nod, repeated.", attention_code(k)); }));
    mobile(kAckStop,
           fixed(plan("Head tilt to look up at the person and a soft light pulse.",
                      {"Wait for the person to stop.", "Tilt the head up towards them.", "Pulse the light strip softly.",
                       "Return the head to neutral."})),
           one([](int k) { return code("Short greeting sequence.", ack_stop_code(k)); }));

    // ---- quadruped, modular ----
    const auto quad = [&](const std::string& instr, Gen p, Gens code_gen) { c.scripts[{kQuad, instr}] = {std::move(p), std::move(code_gen)}; };
    quad(kNod, fixed(plan("No head; the body pitch can imitate a nod.", {"Pitch the body forward.", "Return to level.", "Repeat."})),
         one([](int k) { return code("Body pitch nod.", q_nod(k)); }));
    quad(kShake, fixed(plan("Body yaw imitates shaking a head.", {"Yaw the body left.", "Yaw the body right.", "Repeat, then center."})),
         one([](int k) { return code("Body yaw shake.", q_shake(k)); }));
    quad(kWake, fixed(plan("Sitting and standing up reads as waking.", {"Sit down.", "Stand up.", "Pulse the lights white.", "Sway the body."})),
         one([](int k) { return code("Sit, stand, lights.", q_wake(k)); }));
    quad(kExcuse,
         fixed(plan("Lights and a body dip signal the request; distance is checked first.",
                    {"Wait for the person to stop.", "If the person is close, blink the lights and dip the body.",
                     "Turn slightly and move past."})),
         one([](int k) { return code("Distance check, then signal and pass.", q_excuse(k)); }));
    quad(kRecoverable,
         fixed(plan("Turn away, lower the body and flash red; then return and show green.",
                    {"Turn away.", "Lower the body.", "Flash the lights red.", "Turn back.", "Stand up and show a green light."})),
         one([](int k) { return code("Regret and recovery helpers.", q_recoverable(k)); }));
    quad(kUnrecoverable,
         fixed(plan("Lower the body, show red briefly, then bow and hold.",
                    {"Lower the body.", "Pulse the lights red.", "Bow forwards.", "Hold the bow."})),
         one([](int k) { return code("Bow and hold.", q_unrecoverable(k)); }));
    quad(kAcknowledge,
         fixed(plan("Face the person with body yaw and dip in greeting.",
                    {"Wait until the person is in view.", "Yaw the body towards the person.", "Dip the body.", "Pulse the lights."})),
         one([](int k) { return code("Yaw and dip.", q_acknowledge(k)); }));
    quad(kFollow,
         fixed(plan("Walk after the person.", {"Turn the lights blue.", "Wait.", "Walk along the person's path.", "Lights off."})),
         one([](int k) { return code("Walk after the person.", q_follow(k)); }));
    quad(kApproach,
         fixed(plan("Blink the lights and walk to the person.", {"Wait for the call.", "Blink the lights green.", "Walk to the person."})),
         one([](int k) { return code("Blink then walk.", q_approach(k)); }));
    quad(kAttention,
         fixed(plan("Turn to the person and dip the body while listening.",
                    {"Turn towards the person.", "Turn the lights on.", "Dip the body every second.", "Lights off."})),
         one([](int k) { return code("Turn and dip.", q_attention(k)); }));

    // ---- composition targets ----
    quad(kComposeAck,
         fixed(plan("The learned eye_contact and nod_head skills fit directly.",
                    {"Wait for the person.", "Turn towards them.", "Use eye_contact.", "Use nod_head.", "Turn back."})),
         one([](int k) { return code("Compose the learned skills.", c_ack(k)); }));
    quad(kComposeApproach,
         [](int k) {
             std::vector<std::string> steps{"Wait for the call."};
             if (k != 3) steps.push_back("Use eye_contact.");
             steps.insert(steps.end(), {"Use blink_lights in green.", "Walk to a point near the person."});
             return plan("Learned skills for gaze and lights, then navigate.", steps);
         },
         one([](int k) { return code("Compose learned skills and navigation.", c_approach(k)); }));
    quad(kComposeConfusion,
         [](int k) {
             std::vector<std::string> steps{k == 0 ? "Use look_around." : "Yaw the body left and right to look around.",
                                            "Use shake_head."};
             steps.push_back(k == 2 ? "Turn the lights yellow." : "Use blink_lights in yellow.");
             steps.push_back("Tilt the body to the side and hold.");
             return plan("Looking around, shaking and a tilt read as puzzled.", steps);
         },
         one([](int k) { return code("Mix learned skills and primitives.", c_confusion(k)); }));

    // ---- ablation ----
    c.ablation[kNod] = one(ab_nod);
    c.ablation[kShake] = one(ab_shake);
    c.ablation[kWake] = one(ab_wake);
    c.ablation[kExcuse] = one(ab_excuse);
    c.ablation[kRecoverable] = one(ab_recoverable);
    c.ablation[kUnrecoverable] = one(ab_unrecoverable);
    c.ablation[kAcknowledge] = one(ab_acknowledge);
    c.ablation[kFollow] = one(ab_follow);
    c.ablation[kApproach] = one(ab_approach);
    c.ablation[kAttention] = one(ab_attention);

    // ---- feedback suite ----
    const auto fb = [&](const std::string& instr, const std::string& utterance, const std::string& cot,
                        const std::string& change, bool behavior, Gen p, Gens code_gen) {
        c.feedback[{instr, utterance}] = {fixed(feedback(cot, change, behavior ? "BehaviorAndCode" : "CodeOnly")), change,
                                          behavior ? std::move(p) : Gen{}, std::move(code_gen)};
    };
    const auto steps_excuse = [](std::vector<std::string> steps) { return fixed(plan("Adjusting the sequence.", steps)); };

    fb(kExcuse, "Play a chime before you blink the lights.", "A new sound is requested ahead of the lights.",
       "[Change: What robot should do] Play a chime first, then blink the light strip.", true,
       steps_excuse({"Wait for the person to stop.", "Play a chime.", "Blink the light strip.",
                     "If the person is close, say excuse me.", "Move forward."}),
       one([](int k) { return code("Chime inserted before the lights.", excuse_code(k, k == 3 ? Mod::InsertLate : Mod::Insert)); }));
    fb(kExcuse, "Say excuse me first and blink the lights afterwards.", "The order of speaking and lights is reversed.",
       "[Change: What robot should do] Speak first, then blink the light strip.", true,
       steps_excuse({"Wait for the person to stop.", "If the person is close, say excuse me.", "Blink the light strip.",
                     "Move forward."}),
       one([](int k) { return code("Swapped order.", excuse_code(k, Mod::Swap)); }));
    fb(kExcuse, "Keep blinking: do the whole blink three times in a row.", "Only the repetition changes.",
       "[Change: How robot does it] Repeat the blink three times.", false, {},
       one([](int k) { return code("Wrap the blink in a repeat.", excuse_code(k, Mod::Loop)); }));
    fb(kExcuse, "Do not use the light strip at all.", "The lights must go; a beep can draw attention instead.",
       "[Change: What robot should do] Replace the light signal with a beep.", true,
       steps_excuse({"Wait for the person to stop.", "Beep.", "If the person is close, say excuse me.", "Move forward."}),
       one([](int k) { return code("Beep instead of lights.", excuse_code(k, Mod::Remove)); }));

    fb(kApproach, "Play a chime right before you start walking.", "A sound is added just before navigating.",
       "[Change: What robot should do] Play a chime right before navigating to the person.", true,
       fixed(plan("Adding a chime.", {"Wait for the call.", "Nod once.", "Turn the light green.", "Play a chime.",
                                      "Navigate towards the person.", "Turn the light off."})),
       one([](int k) { return code("Chime before navigation.", approach_code(k, k == 2 ? Mod::Ignore : Mod::Insert)); }));
    fb(kApproach, "Turn the light on only once you have arrived, not before walking.", "Light and navigation swap places.",
       "[Change: What robot should do] Navigate first, then turn the light on.", true,
       fixed(plan("Reordering.", {"Wait for the call.", "Nod once.", "Navigate towards the person.", "Turn the light green.",
                                  "Turn the light off."})),
       one([](int k) { return code("Navigation before the light.", approach_code(k, Mod::Swap)); }));
    fb(kApproach, "Nod twice before you walk over.", "Same plan, the nod repeats.",
       "[Change: How robot does it] Repeat the nod twice.", false, {},
       one([](int k) { return code("Repeat the nod.", approach_code(k, Mod::Loop)); }));
    fb(kApproach, "Don't use your lights for this.", "Lights are removed from the behavior.",
       "[Change: What robot should do] Drop the light signals.", true,
       fixed(plan("Without lights.", {"Wait for the call.", "Nod once.", "Navigate towards the person."})),
       one([](int k) {
           return code("No lights.", approach_code(k, k == 1 || k == 4 ? Mod::RemoveUndefined : Mod::Remove));
       }));

    fb(kAckStop, "When you first see the person, nod at them.", "A nod is wanted as the first greeting.",
       "[Change: What robot should do] Nod at the person as soon as they are there, before the other actions.", true,
       fixed(plan("Adding a first nod.", {"Wait for the person to stop.", "Nod once.", "Tilt the head up towards them.",
                                          "Pulse the light strip.", "Return the head to neutral."})),
       one([](int k) { return code("Nod helper inserted first.", ack_stop_code(k, Mod::Insert)); }));
    fb(kAckStop, "Pulse the lights before you look up at them.", "Light and look swap places.",
       "[Change: What robot should do] Pulse the lights first, then look up.", true,
       fixed(plan("Reordering.", {"Wait for the person to stop.", "Pulse the light strip.", "Tilt the head up.",
                                  "Return the head to neutral."})),
       one([](int k) { return code("Lights first.", ack_stop_code(k, Mod::Swap)); }));
    fb(kAckStop, "rename nothing, just repeat the light pattern twice", "Only the light pattern repeats.",
       "[Change: How robot does it] Repeat the light pattern twice.", false, {},
       one([](int k) { return code("Repeat the pulse.", ack_stop_code(k, k == 2 ? Mod::LoopParam : Mod::Loop)); }));
    fb(kAckStop, "No light strip please; greet them with your head only.", "Replace the light with a head movement.",
       "[Change: What robot should do] Use a head movement instead of the light strip.", true,
       fixed(plan("Head only.", {"Wait for the person to stop.", "Tilt the head up.", "Dip the head.", "Return to neutral."})),
       one([](int k) {
           return code("Head only.", ack_stop_code(k, k == 2 || k == 3 ? Mod::RemoveUndefined : Mod::Remove));
       }));

    // ---- scripted Nod session, ten rounds on sample 0 ----
    struct RoundSpec {
        std::string utterance;
        std::string change;
        bool behavior;
        std::function<void(NodState&)> apply;
    };
    const std::vector<RoundSpec> rounds = {
        {"Nod a bit deeper.", "[Change: How robot does it] Increase the nod depth to 20 degrees.", false, [](NodState& s) { s.depth = 20; }},
        {"Make it two nods instead of one.", "[Change: How robot does it] Repeat the nod twice.", false, [](NodState& s) { s.times = 2; }},
        {"Blink the lights green while you nod.", "[Change: What robot should do] Add a green blink of the light strip.", true,
         [](NodState& s) { s.color = "#00FF00"; }},
        {"Slow the nod down a little.", "[Change: How robot does it] Pause briefly at the bottom of each nod.", false,
         [](NodState& s) { s.pause = 0.3; }},
        {"Look straight ahead before you start nodding.", "[Change: What robot should do] Face straight ahead first.", true,
         [](NodState& s) { s.look_ahead = true; }},
        {"Pause briefly after the nods.", "[Change: How robot does it] Hold still for one second at the end.", false,
         [](NodState& s) { s.rest = true; }},
        {"Use a softer blue instead of green.", "[Change: How robot does it] Change the light color to a soft blue.", false,
         [](NodState& s) { s.color = "#6699FF"; }},
        {"Play a chime at the very start.", "[Change: What robot should do] Start with a chime.", true, [](NodState& s) { s.chime = true; }},
        {"Make the nods shallower again.", "[Change: How robot does it] Reduce the nod depth to 12 degrees.", false,
         [](NodState& s) { s.depth = 12; }},
        {"Turn the lights off at the end.", "[Change: What robot should do] Switch the light strip off at the end.", true,
         [](NodState& s) { s.lights_off = true; }},
    };
    NodState state;
    for (const auto& r : rounds) {
        r.apply(state);
        const NodState snapshot = state;
        fb(kNod, r.utterance, "Interpreting the user's request.", r.change, r.behavior,
           [snapshot](int) { return plan("Updated plan.", nod_session_steps(snapshot)); },
           one([snapshot](int) { return code("Apply the requested change.", nod_session_code(snapshot)); }));
    }
    return c;
}

}  // namespace author
