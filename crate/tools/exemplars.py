"""Writes crates/core/data/exemplars.json (the authored few-shot pool)."""
import json, pathlib

D, TU, FB, UB, CL, CR, SE, DS, EC = ("default", "temporal_urgency", "familiarity_based",
    "unfamiliarity_based", "cognitive_load", "crowded", "socially_engaged", "divergent_setting",
    "environmental_changes")
MC, BI, IC = "multi_choice", "binary", "icon"
V, A, AV = "visual_only", "audio_only", "audio_visual"

rows = {
 "menu_reading": [
  ([D], "User is reading a menu at a restaurant, seated with nothing else going on. The room is moderately quiet.",
   "No constraint limits input or output, so a rich three-way choice with audio and visuals is affordable.",
   "Help choose what to order: 1. Popular dishes, 2. Today's specials, 3. Dishes under $20", MC, AV),
  ([TU], "User is reading a menu and has to order quickly before a movie starts.",
   "Time pressure calls for a single fast confirmation; audio plus visuals makes it hard to miss.",
   "Suggest fast options I can eat from the menu", BI, AV),
  ([FB], "User is reading the menu at a restaurant they visit often.",
   "The user knows this menu; a low-stakes peripheral cue is enough and avoids interruption.",
   "Show an icon to reorder their usual dish", IC, V),
  ([UB], "User is alone in a new restaurant, unfamiliar with the menu. The space is quiet and not crowded.",
   "User may need help deciding what to order and may benefit from both visual and audio support.",
   "Provide dish recommendations (e.g., “Top dishes,” “Vegetarian options,” “What I had last time”).", MC, AV),
  ([CL], "User is reading a menu while holding a toddler on their lap at a restaurant.",
   "Hands are occupied and attention is split, so a quick yes/no confirmation keeps load low.",
   "Read out the kids' menu options", BI, AV),
  ([CR], "User is reading a menu in a busy restaurant filled with patrons; it is loud and crowded.",
   "Audio would be drowned out and speaking is awkward in the crowd; a discreet visual cue works best.",
   "Highlight the most popular dishes on the menu", IC, V),
  ([SE], "User is talking to a friend while deciding what to order at the restaurant.",
   "The user is in conversation; a silent icon avoids interrupting while still offering help.",
   "Show vegan options for my friend", IC, V),
  ([DS], "User is ordering from a casual café counter instead of a formal restaurant.",
   "A counter order is quick and standing; a spoken yes/no keeps the exchange short.",
   "Suggest the café's best-selling drink", BI, AV),
  ([EC], "User is trying to read a menu in a restaurant with dim lighting.",
   "Low light makes the printed menu hard to read; augmenting it visually and reading aloud both help.",
   "Brighten the menu and read items aloud", BI, AV),
 ],
 "cooking": [
  ([D], "User is cooking dinner in their kitchen, standing at the counter with a recipe open.",
   "Nothing constrains the user, so offering a few helpful directions with audio and visuals is fine.",
   "Help with the recipe: 1. Show the next step, 2. Start a timer, 3. List missing ingredients", MC, AV),
  ([TU], "User is cooking in a hurry because guests arrive in fifteen minutes.",
   "Time is short; a single yes/no keeps the exchange fast.",
   "Start timers for every remaining step", BI, AV),
  ([FB], "User is cooking a dish they have made many times in their own kitchen.",
   "A familiar routine needs only a light peripheral reminder.",
   "Show a timer icon for the current step", IC, V),
  ([UB], "User is cooking an unfamiliar recipe for the first time in a friend's kitchen.",
   "A new recipe in a new place invites exploring alternatives with rich support.",
   "Support the new recipe: 1. Show a video of the next step, 2. Locate utensils in this kitchen, 3. Suggest substitutes", MC, AV),
  ([CL], "User is kneading dough with both hands while watching a pot on the stove.",
   "Hands and eyes are both busy, so a spoken yes/no prompt is the only low-effort channel.",
   "Read the next recipe step aloud", BI, A),
  ([CR], "User is cooking in a crowded shared kitchen with several people moving around.",
   "Many people and clatter make audio unreliable; a discreet visual cue is best.",
   "Show a timer icon above the pan", IC, V),
  ([SE], "User is cooking while chatting with a family member in the kitchen.",
   "The user is in conversation; a silent icon will not interrupt.",
   "Show an icon to scale the recipe for two more people", IC, V),
  ([DS], "User is cooking on a camping stove outdoors instead of in a kitchen.",
   "An unusual setting changes what is at hand; a simple confirmation with audio support fits.",
   "Adjust the cooking times for the camping stove", BI, AV),
 ],
 "museum_visit": [
  ([D], "User is visiting a museum, walking slowly through a quiet gallery.",
   "The user has time and attention to spare, so a three-way choice shown visually stays discreet.",
   "Explore this room: 1. Artist biography, 2. Historical background, 3. Similar works nearby", MC, V),
  ([TU], "User is in a museum that closes in twenty minutes and wants to see the highlights.",
   "Under time pressure a single confirmation is fastest; visuals keep it quiet in the gallery.",
   "Guide me to the three must-see works before closing", BI, AV),
  ([FB], "User is in their local museum that they visit often, passing familiar pieces.",
   "The user knows this museum; only a light icon cue for something new is warranted.",
   "Show an icon on works added since the last visit", IC, V),
  ([UB], "User is visiting a museum in a foreign city for the first time.",
   "A new museum invites exploration; a few options help, shown silently in the gallery.",
   "Help explore: 1. Take the highlights tour, 2. Translate the labels, 3. Find the café", MC, V),
  ([CL], "User is studying an art piece closely while holding a bulky audio guide.",
   "Eyes are on the artwork and hands are occupied; a short spoken yes/no avoids visual clutter.",
   "Give a short audio summary of this artwork", BI, A),
  ([CR, CL], "User is in a museum, crowded with people and slightly noisy, while engaged with an art piece.",
   "User may not hear audio clearly and is visually focused on the artwork. A visual, low-effort query is ideal.",
   "Offer more information about the artwork (e.g., title, artist, background).", IC, V),
  ([SE], "User is discussing a painting with a friend in a museum gallery.",
   "The conversation should not be interrupted; a silent icon is the least disruptive.",
   "Show artwork info I am looking at", IC, V),
  ([DS], "User is browsing an outdoor sculpture park rather than an indoor gallery.",
   "Outdoors, audio is acceptable and walking distances matter; a quick confirmation works.",
   "Show the walking route to the next sculpture", BI, AV),
 ],
 "commuting": [
  ([D], "User is commuting on a bus, seated and looking out the window.",
   "No strong constraint; offering a few useful choices with audio and visuals is fine.",
   "Make the ride useful: 1. Remind me before my stop, 2. Show the route map, 3. Play my podcast", MC, AV),
  ([TU], "User is running late and rushing to catch a connecting train.",
   "The user is in a hurry and moving; one spoken confirmation is fastest.",
   "Show the fastest path to the connecting platform", BI, AV),
  ([FB], "User is on their usual bus route to work.",
   "The route is routine; a small icon reminder is enough.",
   "Show a next-stop reminder icon", IC, V),
  ([UB], "User is riding the subway in an unfamiliar city for the first time.",
   "A new transit system raises many questions; alternatives with audio and visuals help.",
   "Help with the trip: 1. Announce each stop, 2. Show the line map, 3. Find the right exit", MC, AV),
  ([CL], "User is reading a book while commuting on the bus.",
   "Eyes are committed to the book, so a short yes/no that does not pull focus fits best.",
   "Remind me to get off at my stop two stops beforehand", BI, AV),
  ([CR], "User is standing on a packed rush-hour train, holding a pole.",
   "The train is crowded and loud; a discreet visual cue avoids speaking aloud.",
   "Show an icon with the number of stops remaining", IC, V),
  ([SE], "User is commuting on the bus while talking with a colleague.",
   "Conversation is ongoing; a silent icon will not interrupt.",
   "Show an icon when their stop is approaching", IC, V),
  ([DS], "User is commuting by ferry instead of their usual bus.",
   "A different mode of transport changes timing; a quick confirmation with audio is helpful.",
   "Notify me when the ferry is about to dock", BI, AV),
 ],
 "workout": [
  ([D], "User is working out at the gym between sets, resting on a bench.",
   "Between sets the user can engage; a few choices with audio and visuals are fine.",
   "Support this workout: 1. Log this set, 2. Show the next exercise, 3. Play my workout playlist", MC, AV),
  ([TU], "User is squeezing a short workout into a lunch break and is short on time.",
   "Time pressure favours one fast confirmation.",
   "Start a 20-minute express routine", BI, AV),
  ([FB], "User is doing their regular routine at their usual gym.",
   "A familiar routine needs only a light icon cue.",
   "Log today's workout", IC, V),
  ([UB], "User is at a new gym for the first time, unsure how to use the machines.",
   "New equipment invites exploring options with rich guidance.",
   "Help with the machines: 1. Show how to use this machine, 2. Suggest a beginner circuit, 3. Find the free weights", MC, AV),
  ([CL], "User is holding dumbbells mid-set at the gym, counting repetitions.",
   "Hands are occupied and attention is on counting; a spoken yes/no keeps it simple.",
   "Count the remaining reps aloud", BI, AV),
  ([CR], "User is in a crowded gym during peak hours, waiting for equipment.",
   "The gym is packed and noisy; a discreet visual cue is best.",
   "Show an icon when the squat rack is free", IC, V),
  ([SE], "User is working out with a training partner and chatting between sets.",
   "The user is talking with a partner; a silent icon avoids interrupting.",
   "Play my workout playlist on Spotify", IC, V),
  ([DS], "User is working out in a park instead of a gym.",
   "Outdoors there is no equipment; a quick confirmation with audio support fits.",
   "Suggest a bodyweight routine for the park", BI, AV),
 ],
 "grocery_shopping": [
  ([D], "User is grocery shopping, walking through the aisles with a basket.",
   "No particular constraint; a three-way choice with audio and visuals works.",
   "Help with shopping: 1. Show my grocery list, 2. Find deals in this aisle, 3. Locate the next item", MC, AV),
  ([TU, FB], "User is in a familiar grocery store but is in a rush, quickly moving through aisles.",
   "User’s gaze is shifting frequently; visual queries may be missed. Audio is preferred.",
   "Offer to recite the user's grocery list", BI, A),
  ([FB], "User is shopping at their regular grocery store on a weekly trip.",
   "The store and list are familiar; a small icon cue suffices.",
   "Show a shopping-list icon", IC, V),
  ([UB], "User is shopping in an unfamiliar grocery store for the first time.",
   "An unknown layout makes alternatives valuable; audio and visuals support wayfinding.",
   "Help find things: 1. Show the store map, 2. Locate the items on my list, 3. Compare prices", MC, AV),
  ([CL], "User is pushing a heavy cart while holding a phone in the other hand.",
   "Both hands are occupied; a yes/no prompt answered by voice or a nod avoids any manual input.",
   "Read out the next item on the list", BI, AV),
  ([CR], "User is shopping in a crowded, noisy supermarket on a weekend afternoon.",
   "Noise and crowd make audio unreliable; a discreet visual cue is best.",
   "Highlight the items on my list in this aisle", IC, V),
  ([SE], "User is grocery shopping with a friend and discussing what to cook.",
   "Conversation is ongoing; a silent icon supports without interrupting.",
   "Show recipe ideas for the items in the cart", IC, V),
  ([DS], "User is shopping at an outdoor farmers market instead of a supermarket.",
   "A market has no aisles or labels; a quick confirmation with audio helps.",
   "Tell me which stalls sell items on my list", BI, AV),
 ],
}

extra = [
 ("grocery_shopping", [TU, CL, CR],
  "User is in a grocery store, browsing aisles alone, holding a shopping cart, and navigating quickly in a noisy, crowded setting.",
  "Because the user is rushing and both visually and physically engaged, a binary audio prompt reduces interaction load.",
  "Offer to recite the user’s grocery list", BI, A),
]

pool = []
for activity, items in rows.items():
    for variants, ctx, reason, action, q, m in items:
        pool.append({"context_text": ctx, "reasoning": reason, "action_text": action,
                     "query_type": q, "modality": m,
                     "tags": {"activity": activity, "variants": variants}})
for activity, variants, ctx, reason, action, q, m in extra:
    pool.append({"context_text": ctx, "reasoning": reason, "action_text": action,
                 "query_type": q, "modality": m,
                 "tags": {"activity": activity, "variants": variants}})

out = pathlib.Path(__file__).resolve().parent.parent / "crates/core/data/exemplars.json"
out.write_text(json.dumps(pool, indent=2, ensure_ascii=False) + "\n")
print(len(pool), "exemplars ->", out)
