"""Writes the bundled scenario scripts into crates/core/data/scenarios/."""
import json, pathlib

def snap(activity, location, familiarity="neutral", urgency="none", noise="moderate", crowd="sparse",
         social=False, hands=False, visual=False, quiet_public=False):
    return {"activity": activity, "location": location, "familiarity": familiarity, "urgency": urgency,
            "noise_level": noise, "crowd_density": crowd, "social_engagement": social,
            "hands_occupied": hands, "visually_engaged": visual, "quiet_public": quiet_public}

ALL = ["gaze", "hand_gesture", "head_gesture", "voice"]
def without(*off):
    return [m for m in ALL if m not in off]

S = [
 ("01-menu-unfamiliar", "Alone in a new restaurant, unfamiliar with the menu. The space is quiet and not crowded.",
  snap("menu_reading", "new restaurant", familiarity="unfamiliar", noise="quiet", crowd="alone"), [],
  "multi_choice", "audio_visual", ALL, "option2"),
 ("02-menu-social", "Deciding what to order while talking with a friend.",
  snap("menu_reading", "restaurant", social=True), [],
  "icon", "visual_only", without("voice"), "icon_activate"),
 ("03-cooking-unfamiliar", "Cooking an unfamiliar recipe in a friend's kitchen.",
  snap("cooking", "friend's kitchen", familiarity="unfamiliar"), [],
  "multi_choice", "audio_visual", ALL, "option3"),
 ("04-cooking-hands", "Kneading dough with both hands while watching the stove.",
  snap("cooking", "home kitchen", crowd="alone", hands=True, visual=True), [],
  "binary", "audio_only", without("gaze", "hand_gesture"), "yes"),
 ("05-museum-unfamiliar", "First visit to a museum abroad; the gallery is hushed.",
  snap("museum_visit", "museum gallery abroad", familiarity="unfamiliar", noise="quiet", quiet_public=True), [],
  "multi_choice", "visual_only", without("voice"), "option1"),
 ("06-museum-crowded", "In a museum, crowded with people and slightly noisy, while engaged with an art piece.",
  snap("museum_visit", "museum", crowd="crowded", visual=True, quiet_public=True), [],
  "icon", "visual_only", without("gaze", "voice"), "icon_activate"),
 ("07-commuting-unfamiliar", "Riding the subway in an unfamiliar city for the first time.",
  snap("commuting", "subway in a new city", familiarity="unfamiliar"), [],
  "multi_choice", "audio_visual", ALL, "option2"),
 ("08-commuting-rush", "Late for a connection after taking the ferry instead of the usual bus.",
  snap("commuting", "ferry terminal", familiarity="familiar", urgency="rushed"), ["divergent_setting"],
  "binary", "audio_visual", ALL, "yes"),
 ("09-workout-unfamiliar", "First session at a new, loud gym.",
  snap("workout", "new gym", familiarity="unfamiliar", noise="loud"), [],
  "multi_choice", "visual_only", without("voice"), "option2"),
 ("10-workout-hands", "Mid-set with dumbbells in both hands.",
  snap("workout", "gym", hands=True), [],
  "binary", "audio_visual", without("hand_gesture"), "yes"),
 ("11-grocery-unfamiliar", "Shopping in a grocery store for the first time.",
  snap("grocery_shopping", "unfamiliar grocery store", familiarity="unfamiliar"), [],
  "multi_choice", "audio_visual", ALL, "option3"),
 ("12-grocery-rush", "In a familiar grocery store but in a rush, quickly moving through aisles.",
  snap("grocery_shopping", "grocery store", familiarity="familiar", urgency="rushed", visual=True), [],
  "binary", "audio_only", without("gaze"), "no"),
]

out = pathlib.Path(__file__).resolve().parent.parent / "crates/core/data/scenarios"
for sid, narration, snapshot, extra, q, p, enabled, resp in S:
    doc = {"id": sid, "narration": narration, "snapshot": snapshot, "extra_variants": extra,
           "sensor_trace": f"traces/{sid}.jsonl",
           "expected": {"query_type": q, "presentation": p, "enabled_inputs": enabled, "response_value": resp},
           "prompt_deadline_ms": 10000}
    (out / f"{sid}.json").write_text(json.dumps(doc, indent=2) + "\n")
print(len(S), "scenarios")
