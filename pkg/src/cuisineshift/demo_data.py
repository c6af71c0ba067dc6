"""Deterministic demo corpus with a controlled cuisine structure.

Generates a labeled recipe collection shaped like the public recipe
datasets this package targets: twenty countries with a long-tailed
recipe count, a universal pantry shared by everyone, regional staples
shared within clusters, per-country signature ingredients, and a rare
tail. Inclusion rates are explicit per (ingredient, country), so
conditional probabilities the tests rely on (what does mirin imply, how
ambiguous are onions) are designed rather than accidental.

Every ingredient is drawn independently per recipe with its country's
rate; a single seeded generator makes the corpus a pure function of the
seed and scale.
"""

from __future__ import annotations

import json
from typing import Dict, List, Sequence

import numpy as np

from .corpus import Recipe, make_recipe

# Recipe counts follow the familiar long-tailed country distribution at
# roughly one-eighth size, so priors (italian largest at ~0.20) carry over.
CUISINE_RECIPE_COUNTS: Dict[str, int] = {
    "italian": 940,
    "mexican": 772,
    "southern_us": 518,
    "indian": 360,
    "chinese": 321,
    "french": 318,
    "cajun_creole": 186,
    "thai": 185,
    "japanese": 171,
    "greek": 141,
    "spanish": 119,
    "korean": 100,
    "vietnamese": 99,
    "moroccan": 99,
    "british": 96,
    "filipino": 91,
    "irish": 80,
    "jamaican": 63,
    "russian": 59,
    "brazilian": 56,
}

_EAST_ASIA = ("japanese", "chinese", "korean")
_SE_ASIA = ("thai", "vietnamese", "filipino")
_WESTERN = ("italian", "mexican", "southern_us", "french", "cajun_creole",
            "greek", "spanish", "british", "irish", "russian", "brazilian")


def _rates(default: float = 0.0, **per_country: float) -> Dict[str, float]:
    table = {"*": default}
    table.update(per_country)
    return table


def _uniform(rate: float) -> Dict[str, float]:
    return {"*": rate}


def _groups(default: float, groups: Sequence, rate: float) -> Dict[str, float]:
    table = {"*": default}
    for g in groups:
        table[g] = rate
    return table


# name -> {country: inclusion rate}, "*" is the fallback rate.
INGREDIENT_RATES: Dict[str, Dict[str, float]] = {
    # universal pantry; onions deliberately flat so no country owns them
    "salt": _uniform(0.70),
    "water": _uniform(0.45),
    "onions": _uniform(0.50),
    "garlic": _uniform(0.50),
    "sugar": _uniform(0.30),
    "white sugar": _uniform(0.25),
    "black pepper": _uniform(0.40),
    "all-purpose flour": _uniform(0.25),
    "carrots": _uniform(0.30),
    "milk": _uniform(0.25),
    "chicken breasts": _uniform(0.25),
    "egg": _groups(0.30, _EAST_ASIA, 0.44),
    "vegetable oil": _groups(0.25, _EAST_ASIA + _SE_ASIA, 0.46),
    "green onions": _rates(0.12, japanese=0.55, chinese=0.50, korean=0.50,
                           vietnamese=0.40, thai=0.35, filipino=0.35),
    "butter": _groups(0.08, _WESTERN, 0.45),
    "ground beef": _groups(0.25, _EAST_ASIA + _SE_ASIA, 0.12),
    "tomatoes": _rates(0.30, italian=0.45, greek=0.45, spanish=0.45,
                       japanese=0.12, chinese=0.12, korean=0.12),
    "lemon juice": _rates(0.20, greek=0.40, moroccan=0.35),
    # staples shared across regions, rates shaped for the probe behavior
    "soy sauce": _rates(0.02, japanese=0.80, chinese=0.75, korean=0.55,
                        filipino=0.45, thai=0.32, vietnamese=0.38),
    "olive oil": _rates(0.05, italian=0.75, greek=0.80, spanish=0.80,
                        french=0.55, moroccan=0.50, mexican=0.15,
                        japanese=0.02, chinese=0.02, korean=0.02),
    "ginger": _rates(0.03, chinese=0.55, japanese=0.45, korean=0.45,
                     indian=0.55, thai=0.45, vietnamese=0.40, filipino=0.30),
    "rice": _rates(0.08, japanese=0.45, chinese=0.45, korean=0.45, thai=0.35,
                   vietnamese=0.35, filipino=0.40, indian=0.35, spanish=0.30),
    "fish sauce": _rates(0.0, thai=0.65, vietnamese=0.60, filipino=0.25),
    "thyme": _rates(0.03, french=0.50, cajun_creole=0.12, british=0.10,
                    irish=0.10, jamaican=0.12),
    "shiitake": _rates(0.0, japanese=0.40, chinese=0.18, korean=0.15),
    "chinese cabbage": _rates(0.0, chinese=0.32, korean=0.28, japanese=0.26),
    "beef sirloin": _rates(0.02, japanese=0.16, korean=0.12, chinese=0.08,
                           british=0.12, southern_us=0.12, french=0.10,
                           irish=0.12, russian=0.10),
    "melted butter": _rates(0.0, southern_us=0.25, french=0.22, british=0.22,
                            irish=0.18),
    "coconut milk": _rates(0.0, thai=0.60, indian=0.30, vietnamese=0.25,
                           filipino=0.30, jamaican=0.30, brazilian=0.25),
    "cumin": _rates(0.02, mexican=0.60, indian=0.60, moroccan=0.50, spanish=0.20),
    "cilantro": _rates(0.02, mexican=0.55, indian=0.35, thai=0.40,
                       vietnamese=0.45, moroccan=0.25),
    "turmeric": _rates(0.0, indian=0.50, moroccan=0.15, thai=0.10),
    "rice vinegar": _rates(0.0, japanese=0.35, chinese=0.30, korean=0.25,
                           vietnamese=0.15),
    "toasted sesame oil": _rates(0.0, korean=0.50, chinese=0.35, japanese=0.30,
                                 vietnamese=0.15),
    "short grain rice": _rates(0.0, japanese=0.35, korean=0.30),
    "rice noodles": _rates(0.0, vietnamese=0.45, thai=0.40, chinese=0.20),
    "bean sprouts": _rates(0.0, vietnamese=0.40, thai=0.30, chinese=0.25,
                           korean=0.20),
    "hoisin sauce": _rates(0.0, chinese=0.30, vietnamese=0.25),
    "star anise": _rates(0.0, vietnamese=0.30, chinese=0.25),
    "lemongrass": _rates(0.0, thai=0.45, vietnamese=0.35),
    "fresh mint": _rates(0.0, vietnamese=0.35, greek=0.20, moroccan=0.25,
                         british=0.10),
    "worcestershire sauce": _rates(0.0, cajun_creole=0.25, southern_us=0.20,
                                   british=0.15),
    "hot sauce": _rates(0.0, cajun_creole=0.40, southern_us=0.30, mexican=0.20,
                        jamaican=0.15),
    "okra": _rates(0.0, cajun_creole=0.25, southern_us=0.20, indian=0.12),
    "sour cream": _rates(0.0, russian=0.55, mexican=0.30, southern_us=0.20,
                         british=0.15, irish=0.15),
    "dried dill": _rates(0.0, russian=0.30, greek=0.25),
    "fresh dill": _rates(0.0, russian=0.40, greek=0.25),
    "cabbage": _rates(0.0, irish=0.45, russian=0.35, british=0.20,
                      southern_us=0.15),
    "lamb shoulder": _rates(0.0, irish=0.30, moroccan=0.30, greek=0.25,
                            british=0.20, indian=0.15),
    "wholemeal flour": _rates(0.0, irish=0.25, british=0.20),
    "plantains": _rates(0.0, jamaican=0.40, brazilian=0.25, filipino=0.15,
                        mexican=0.10),
    "black beans": _rates(0.0, brazilian=0.50, mexican=0.45, southern_us=0.15),
    "condensed milk": _rates(0.0, brazilian=0.35, filipino=0.25, vietnamese=0.20,
                             thai=0.15, russian=0.10),
    # per-country signatures
    "grated parmesan cheese": _rates(0.0, italian=0.35),
    "pecorino romano cheese": _rates(0.0, italian=0.18),
    "prosciutto": _rates(0.0, italian=0.18),
    "marinara sauce": _rates(0.0, italian=0.18),
    "sweet italian sausage": _rates(0.0, italian=0.18),
    "fresh mozzarella": _rates(0.0, italian=0.22),
    "fresh basil": _rates(0.0, italian=0.35),
    "dried oregano": _rates(0.0, italian=0.30, greek=0.15),
    "penne pasta": _rates(0.0, italian=0.20),
    "arborio rice": _rates(0.0, italian=0.12),
    "balsamic vinegar": _rates(0.0, italian=0.22),
    "ricotta cheese": _rates(0.0, italian=0.18),
    "corn tortillas": _rates(0.0, mexican=0.35),
    "salsa": _rates(0.0, mexican=0.30),
    "tortilla chips": _rates(0.0, mexican=0.18),
    "guacamole": _rates(0.0, mexican=0.15),
    "poblano peppers": _rates(0.0, mexican=0.18),
    "jalapeno chilies": _rates(0.0, mexican=0.30),
    "queso fresco": _rates(0.0, mexican=0.18),
    "refried beans": _rates(0.0, mexican=0.15),
    "chipotle peppers": _rates(0.0, mexican=0.15),
    "masa harina": _rates(0.0, mexican=0.10),
    "taco seasoning": _rates(0.0, mexican=0.15),
    "enchilada sauce": _rates(0.0, mexican=0.12),
    "buttermilk": _rates(0.0, southern_us=0.30),
    "grits": _rates(0.0, southern_us=0.18),
    "collard greens": _rates(0.0, southern_us=0.20),
    "cornmeal": _rates(0.0, southern_us=0.25),
    "pecans": _rates(0.0, southern_us=0.18),
    "bourbon": _rates(0.0, southern_us=0.12),
    "black-eyed peas": _rates(0.0, southern_us=0.15),
    "country ham": _rates(0.0, southern_us=0.12),
    "pimento cheese": _rates(0.0, southern_us=0.10),
    "sorghum syrup": _rates(0.0, southern_us=0.08),
    "garam masala": _rates(0.0, indian=0.40),
    "ghee": _rates(0.0, indian=0.30),
    "paneer": _rates(0.0, indian=0.20),
    "basmati rice": _rates(0.0, indian=0.35),
    "curry leaves": _rates(0.0, indian=0.22),
    "cardamom pods": _rates(0.0, indian=0.20),
    "tandoori paste": _rates(0.0, indian=0.10),
    "naan": _rates(0.0, indian=0.12),
    "red lentils": _rates(0.0, indian=0.18),
    "mustard seeds": _rates(0.0, indian=0.25),
    "mango chutney": _rates(0.0, indian=0.10),
    "hoisin glaze": _rates(0.0, chinese=0.10),
    "oyster sauce": _rates(0.0, chinese=0.30),
    "szechuan peppercorns": _rates(0.0, chinese=0.15),
    "five-spice powder": _rates(0.0, chinese=0.18),
    "wonton wrappers": _rates(0.0, chinese=0.15),
    "black bean sauce": _rates(0.0, chinese=0.15),
    "bok choy": _rates(0.0, chinese=0.25),
    "shaoxing wine": _rates(0.0, chinese=0.20),
    "chow mein noodles": _rates(0.0, chinese=0.12),
    "dark soy sauce": _rates(0.0, chinese=0.18),
    "cognac": _rates(0.0, french=0.30),
    "calvados": _rates(0.0, french=0.32),
    "gruyere cheese": _rates(0.0, french=0.30),
    "nicoise olives": _rates(0.0, french=0.28),
    "bouquet garni": _rates(0.0, french=0.30),
    "fresh tarragon": _rates(0.0, french=0.30),
    "creme fraiche": _rates(0.0, french=0.25),
    "herbes de provence": _rates(0.0, french=0.20),
    "dijon mustard": _rates(0.0, french=0.28),
    "brie cheese": _rates(0.0, french=0.15),
    "baguette": _rates(0.0, french=0.15),
    "puff pastry": _rates(0.0, french=0.12),
    "cajun seasoning": _rates(0.0, cajun_creole=0.40),
    "andouille sausage": _rates(0.0, cajun_creole=0.35),
    "creole mustard": _rates(0.0, cajun_creole=0.20),
    "file powder": _rates(0.0, cajun_creole=0.12),
    "crawfish tails": _rates(0.0, cajun_creole=0.20),
    "blackening spice": _rates(0.0, cajun_creole=0.15),
    "red beans": _rates(0.0, cajun_creole=0.20),
    "tasso ham": _rates(0.0, cajun_creole=0.08),
    "red curry paste": _rates(0.0, thai=0.35),
    "green curry paste": _rates(0.0, thai=0.25),
    "kaffir lime leaves": _rates(0.0, thai=0.25),
    "palm sugar": _rates(0.0, thai=0.25),
    "thai chile": _rates(0.0, thai=0.30),
    "pad thai noodles": _rates(0.0, thai=0.15),
    "galangal": _rates(0.0, thai=0.15),
    "thai basil": _rates(0.0, thai=0.30),
    "mirin": _rates(0.0, japanese=0.45),
    "dashi": _rates(0.0, japanese=0.35),
    "nori": _rates(0.0, japanese=0.30),
    "wasabi paste": _rates(0.0, japanese=0.25),
    "bonito flakes": _rates(0.0, japanese=0.25),
    "konnyaku": _rates(0.0, japanese=0.15),
    "miso paste": _rates(0.0, japanese=0.30),
    "sake": _rates(0.0, japanese=0.30),
    "udon noodles": _rates(0.0, japanese=0.15),
    "panko breadcrumbs": _rates(0.0, japanese=0.15),
    "pickled ginger": _rates(0.0, japanese=0.12),
    "edamame": _rates(0.0, japanese=0.12),
    "feta cheese crumbles": _rates(0.0, greek=0.40),
    "kalamata olives": _rates(0.0, greek=0.35),
    "greek yogurt": _rates(0.0, greek=0.30),
    "phyllo dough": _rates(0.0, greek=0.15),
    "grape leaves": _rates(0.0, greek=0.12),
    "halloumi": _rates(0.0, greek=0.10),
    "orzo pasta": _rates(0.0, greek=0.15),
    "ouzo": _rates(0.0, greek=0.08),
    "smoked paprika": _rates(0.0, spanish=0.35),
    "chorizo": _rates(0.0, spanish=0.40),
    "saffron threads": _rates(0.0, spanish=0.30),
    "manchego cheese": _rates(0.0, spanish=0.25),
    "sherry vinegar": _rates(0.0, spanish=0.20),
    "spanish olives": _rates(0.0, spanish=0.15),
    "bomba rice": _rates(0.0, spanish=0.10),
    "serrano ham": _rates(0.0, spanish=0.15),
    "piquillo peppers": _rates(0.0, spanish=0.12),
    "gochujang": _rates(0.0, korean=0.45),
    "kimchi": _rates(0.0, korean=0.40),
    "gochugaru": _rates(0.0, korean=0.30),
    "korean radish": _rates(0.0, korean=0.15),
    "rice cakes": _rates(0.0, korean=0.15),
    "doenjang": _rates(0.0, korean=0.15),
    "perilla leaves": _rates(0.0, korean=0.10),
    "rice paper wrappers": _rates(0.0, vietnamese=0.30),
    "vietnamese coriander": _rates(0.0, vietnamese=0.12),
    "pho spice blend": _rates(0.0, vietnamese=0.12),
    "pickled daikon": _rates(0.0, vietnamese=0.15),
    "fried shallots": _rates(0.0, vietnamese=0.15),
    "banana blossom": _rates(0.0, vietnamese=0.08),
    "ras el hanout": _rates(0.0, moroccan=0.40),
    "preserved lemons": _rates(0.0, moroccan=0.35),
    "harissa": _rates(0.0, moroccan=0.30),
    "couscous": _rates(0.0, moroccan=0.40),
    "dried apricots": _rates(0.0, moroccan=0.20),
    "medjool dates": _rates(0.0, moroccan=0.20),
    "orange blossom water": _rates(0.0, moroccan=0.10),
    "argan oil": _rates(0.0, moroccan=0.08),
    "double cream": _rates(0.0, british=0.30),
    "self-raising flour": _rates(0.0, british=0.25),
    "back bacon": _rates(0.0, british=0.20),
    "stilton cheese": _rates(0.0, british=0.15),
    "malt vinegar": _rates(0.0, british=0.15),
    "golden syrup": _rates(0.0, british=0.15),
    "clotted cream": _rates(0.0, british=0.12),
    "suet": _rates(0.0, british=0.10),
    "marmite": _rates(0.0, british=0.08),
    "calamansi juice": _rates(0.0, filipino=0.30),
    "lumpia wrappers": _rates(0.0, filipino=0.25),
    "coconut vinegar": _rates(0.0, filipino=0.20),
    "pancit noodles": _rates(0.0, filipino=0.20),
    "bagoong": _rates(0.0, filipino=0.15),
    "banana ketchup": _rates(0.0, filipino=0.15),
    "annatto powder": _rates(0.0, filipino=0.15),
    "ube": _rates(0.0, filipino=0.10),
    "irish butter": _rates(0.0, irish=0.30),
    "irish cheddar": _rates(0.0, irish=0.25),
    "guinness": _rates(0.0, irish=0.20),
    "irish bacon": _rates(0.0, irish=0.20),
    "steel-cut oats": _rates(0.0, irish=0.20),
    "jerk seasoning": _rates(0.0, jamaican=0.50),
    "scotch bonnet peppers": _rates(0.0, jamaican=0.40),
    "allspice berries": _rates(0.0, jamaican=0.30),
    "jamaican curry powder": _rates(0.0, jamaican=0.25),
    "callaloo": _rates(0.0, jamaican=0.15),
    "ackee": _rates(0.0, jamaican=0.10),
    "beets": _rates(0.0, russian=0.40),
    "buckwheat groats": _rates(0.0, russian=0.25),
    "rye bread": _rates(0.0, russian=0.20),
    "pickled herring": _rates(0.0, russian=0.15),
    "kefir": _rates(0.0, russian=0.12),
    "kvass": _rates(0.0, russian=0.06),
    "cachaca": _rates(0.0, brazilian=0.30),
    "farofa": _rates(0.0, brazilian=0.25),
    "hearts of palm": _rates(0.0, brazilian=0.25),
    "tapioca flour": _rates(0.0, brazilian=0.20),
    "dende oil": _rates(0.0, brazilian=0.15),
}

_TAIL_RATE = 0.04

# Regional clusters: a country's signature ingredients leak at a low rate
# into its siblings, so cuisines blur into neighbors the way real ones do.
_CLUSTERS = (
    ("japanese", "chinese", "korean"),
    ("thai", "vietnamese", "filipino"),
    ("indian", "moroccan"),
    ("mexican", "brazilian", "jamaican"),
    ("italian", "french", "spanish", "greek"),
    ("british", "irish", "russian"),
    ("southern_us", "cajun_creole"),
)
_LEAK_FRACTION = 0.18
_LEAK_CAP = 0.07
_LABEL_NOISE = 0.07
# fraction of recipes subsampled short (1-3 ingredients), like the stubs and
# condiment mixes in real exports; they anchor the classifier's behavior
# on sparse inputs, which single-ingredient probes rely on
_SHORT_RATE = 0.12
# single-item glossary stubs per signature ingredient (scaled), and the
# per-country rate an item needs somewhere before it earns glossary rows
_GLOSSARY_REPEATS = 8
_GLOSSARY_MIN_RATE = 0.20

# Rare tail, a handful of low-frequency items per country.
TAIL_INGREDIENTS: Dict[str, List[str]] = {
    "italian": ["castelvetrano olives", "san marzano tomatoes", "aged provolone",
                "truffle paste", "amaretti cookies", "limoncello"],
    "mexican": ["epazote", "huitlacoche", "cotija cheese", "tomatillo salsa",
                "achiote paste", "hominy"],
    "southern_us": ["chow chow relish", "benne seeds", "muscadine jelly",
                    "white lily flour", "smoked hog jowl", "cane syrup"],
    "indian": ["amchur powder", "fenugreek leaves", "jaggery", "curry powder mix",
               "black salt", "gram flour"],
    "chinese": ["fermented black beans", "lotus root", "century egg",
                "goji berries", "white fungus", "osmanthus syrup"],
    "french": ["quatre epices", "verjus", "morel mushrooms", "fleur de sel",
               "crepe batter mix", "lavender honey"],
    "cajun_creole": ["boudin sausage", "satsuma zest", "mirliton squash",
                     "popcorn rice", "pickled pork", "crab boil spice"],
    "thai": ["banana leaves", "tamarind paste", "holy basil", "salted radish",
             "young green peppercorns", "sticky rice flour"],
    "japanese": ["yuzu kosho", "shiso leaves", "umeboshi plums", "kinako powder",
                 "sansho pepper", "black sesame paste"],
    "greek": ["mastiha", "trahana", "graviera cheese", "vine tomatoes",
              "petimezi", "santorini capers"],
    "spanish": ["pimenton picante", "marcona almonds", "membrillo",
                "fino sherry", "padron peppers", "squid ink"],
    "korean": ["fish cakes", "sweet potato noodles", "korean pear",
               "roasted seaweed snack", "chrysanthemum greens", "makgeolli"],
    "vietnamese": ["annatto seeds", "dried shrimp", "pandan leaves",
                   "fermented fish paste", "young jackfruit", "lotus stems"],
    "moroccan": ["smen", "barberries", "rose petals", "khobz bread",
                 "green olives with pits", "saffron water"],
    "british": ["mixed spice", "black pudding", "bramley apples",
                "treacle", "watercress", "piccalilli"],
    "filipino": ["macapuno strings", "taro leaves", "longanisa",
                 "shrimp paste blocks", "pandesal", "kangkong"],
    "irish": ["dulse flakes", "barmbrack spice", "carrageen moss",
              "smoked salmon trim", "floury potatoes", "oat groats"],
    "jamaican": ["sorrel petals", "breadfruit", "cho cho squash",
                 "pimento leaves", "festival dough mix", "browning sauce"],
    "russian": ["sea buckthorn", "farmer cheese", "sprats", "horseradish root",
                "pickled mushrooms", "black radish"],
    "brazilian": ["acai pulp", "catupiry cheese", "malagueta peppers",
                  "cassava leaves", "carne seca", "guava paste"],
}

SUKIYAKI_NAME = "sukiyaki"
SUKIYAKI_INGREDIENTS = (
    "soy sauce", "beef sirloin", "white sugar", "green onions", "mirin",
    "shiitake", "egg", "vegetable oil", "konnyaku", "chinese cabbage",
)
# The five-step makeover toward french used by the walkthrough and tests.
SUKIYAKI_SWAPS = (
    ("mirin", "calvados"),
    ("vegetable oil", "olive oil"),
    ("soy sauce", "bouquet garni"),
    ("green onions", "fresh tarragon"),
    ("egg", "melted butter"),
)


def _country_rate_vector(names: List[str], tables: List[Dict[str, float]],
                         cuisine: str) -> np.ndarray:
    return np.array(
        [t.get(cuisine, t.get("*", 0.0)) for t in tables], dtype=np.float64
    )


def _leaked(table: Dict[str, float]) -> Dict[str, float]:
    """Spread a single-country signature into its cluster siblings."""
    owners = [c for c in table if c != "*" and table[c] > 0.0]
    if len(owners) != 1 or table.get("*", 0.0) > 0.0:
        return table
    owner = owners[0]
    rate = table[owner]
    spread = dict(table)
    for cluster in _CLUSTERS:
        if owner in cluster:
            for sibling in cluster:
                if sibling != owner:
                    spread[sibling] = min(_LEAK_FRACTION * rate, _LEAK_CAP)
    return spread


def generate_demo_corpus(seed: int = 7, scale: float = 1.0,
                         label_noise: float = _LABEL_NOISE) -> List[Recipe]:
    """Build the corpus; a pure function of (seed, scale, label_noise).

    scale multiplies the per-country recipe counts (minimum 3 recipes per
    country so every label survives small fixtures). label_noise relabels
    that fraction of recipes with a prior-weighted random country, keeping
    the classes genuinely overlapping so trained probabilities stay
    calibrated instead of saturating.
    """
    names = list(INGREDIENT_RATES.keys())
    tables = [_leaked(INGREDIENT_RATES[n]) for n in names]
    for cuisine, tail in TAIL_INGREDIENTS.items():
        for item in tail:
            names.append(item)
            tables.append({cuisine: _TAIL_RATE})
    all_countries = list(CUISINE_RECIPE_COUNTS)
    priors = np.array([CUISINE_RECIPE_COUNTS[c] for c in all_countries], dtype=np.float64)
    priors /= priors.sum()
    rng = np.random.default_rng(seed)
    recipes: List[Recipe] = []
    rid = 0
    # Glossary stubs: signature items show up as one-item entries whose
    # label mix apportions the exact conditional P(country | item). Random
    # short rows alone leave most single-item inputs with zero training
    # coverage, so without these the model's answer there is arbitrary;
    # sampling the labels instead of apportioning them makes three-row
    # lotteries decide which country owns an ingredient.
    counts = np.array([max(3, int(round(CUISINE_RECIPE_COUNTS[c] * scale)))
                       for c in all_countries], dtype=np.float64)
    repeats = max(1, int(round(_GLOSSARY_REPEATS * scale)))
    for j, table in enumerate(tables):
        if max(table.values()) < _GLOSSARY_MIN_RATE:
            continue
        cond = np.array(
            [counts[i] * table.get(c, table.get("*", 0.0))
             for i, c in enumerate(all_countries)], dtype=np.float64)
        cond /= cond.sum()
        quota = repeats * cond
        alloc = np.floor(quota).astype(np.int64)
        remainder = quota - alloc
        short_by = repeats - int(alloc.sum())
        # lexsort: biggest remainder wins, country order breaks ties
        for i in np.lexsort((np.arange(len(alloc)), -remainder))[:short_by]:
            alloc[i] += 1
        for i in np.flatnonzero(alloc):
            for _ in range(int(alloc[i])):
                recipes.append(make_recipe(rid, [names[j]], all_countries[i]))
                rid += 1
    for cuisine, base_count in CUISINE_RECIPE_COUNTS.items():
        count = max(3, int(round(base_count * scale)))
        rates = _country_rate_vector(names, tables, cuisine)
        draws = rng.random((count, len(names))) < rates[None, :]
        short = rng.random(count) < _SHORT_RATE
        short_sizes = rng.choice([1, 2, 3], size=count, p=[0.5, 0.3, 0.2])
        # label noise skips the short rows: they are the only anchors the
        # sparse region has, and noise there gets memorized as truth
        relabel = (rng.random(count) < label_noise) & ~short
        labels = rng.choice(len(all_countries), size=count, p=priors)
        for r, row in enumerate(draws):
            active = np.flatnonzero(row)
            if short[r] and active.size > 0:
                # subsample the drawn row uniformly so short recipes keep
                # the same per-ingredient conditionals as full ones
                take = min(int(short_sizes[r]), active.size)
                picked = rng.choice(active, size=take, replace=False)
                chosen = [names[j] for j in sorted(picked)]
            else:
                chosen = [names[j] for j in active]
            if not chosen:
                chosen = ["salt"]
            label = all_countries[labels[r]] if relabel[r] else cuisine
            recipes.append(make_recipe(rid, chosen, label))
            rid += 1
    return recipes


def write_demo_json(path, recipes: Sequence[Recipe]) -> None:
    """Serialize recipes in the interchange format load_corpus reads."""
    payload = [
        {"id": r.id, "cuisine": r.cuisine, "ingredients": list(r.ingredients)}
        for r in recipes
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
