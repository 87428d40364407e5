#!/usr/bin/env python3
"""Generate the bundled synthetic pipeline fixture.

Everything is fictional: outlets, politicians, parties. The output is a pure
function of --seed, so regenerating with the default seed reproduces the
committed files.
"""

import argparse
import json
import random
from pathlib import Path

OUTLETS = [
    ("lemiroir", "lemiroir.example", "center-left"),
    ("lavigie", "lavigie.example", "center-right"),
    ("ledevoir", "ledevoir-news.example", "center"),
    ("laboussole", "laboussole.example", None),
    ("lecourrier", "lecourrier.example", "left"),
    ("lagazette", "lagazette.example", "right"),
    ("lechodunord", "lechodunord.example", None),
    ("laprovince", "laprovince.example", "center"),
    ("lestelegrammes", "telegrammes.example", "center-right"),
    ("lephare", "lephare.example", "left"),
    ("lemonitor", "lemonitor.example", None),
    ("lheraut", "lheraut.example", "right"),
]
# relative publication volume per outlet
OUTLET_WEIGHTS = [14, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2]

PARTIES = [
    # party_kb_id, name, country, left_right, crosswalked
    ("Q-P1", "Front Radical", "FR", 1.2, True),
    ("Q-P2", "Union Sociale", "FR", 2.0, True),
    ("Q-P3", "Parti Vert", "FR", 3.4, True),
    ("Q-P4", "Mouvement Central", "FR", 5.1, True),
    ("Q-P5", "Alliance Civique", "FR", 6.0, True),
    ("Q-P6", "Republicains Unis", "FR", 7.3, True),
    ("Q-P7", "Rassemblement Souverain", "FR", 9.1, True),
    ("Q-P8", "Ligue Nationale", "FR", 10.0, True),
    ("Q-P9", "Parti Regional", "FR", 4.0, False),
    ("Q-P10", "Europe Demain", "BE", 8.0, True),
    ("Q-P11", "Independants", "FR", 5.5, False),
]

FIRST_M = ["Adrien", "Bastien", "Cyril", "Damien", "Etienne", "Florent", "Gilles", "Hugo", "Lucien", "Marius",
           "Nicolas", "Octave", "Pascal", "Remi", "Sylvain", "Thibault", "Urbain", "Victor"]
FIRST_F = ["Agathe", "Blanche", "Celine", "Delphine", "Eloise", "Fanny", "Gisele", "Helene", "Ines", "Josiane",
           "Lucie", "Maelle", "Noemie", "Odile", "Pauline", "Rosalie", "Solene", "Viviane"]
LAST = ["Arnaud", "Beaumont", "Carrel", "Dufresne", "Escoffier", "Fauvel", "Garnier", "Hamelin", "Jourdan",
        "Lacombe", "Marchal", "Norel", "Orsini", "Perrault", "Quentel", "Rivoire", "Sauvage", "Tessier", "Vidal",
        "Willemin", "Aubert", "Brunel", "Chevalier", "Delorme", "Ferrand", "Guerin", "Hubert", "Joubert",
        "Lefort", "Mallet", "Nadaud", "Olivier", "Pichon", "Raynaud", "Simonet", "Thuillier", "Vasseur",
        "Bonnefoy", "Castel", "Deschamps", "Favre", "Gaudin", "Lambert", "Michaud", "Poulain", "Roussel",
        "Texier", "Vernier", "Blanchard", "Collin"]

ORGS = [("Banque Centrale", "Q-O1", "organization"), ("Conseil Constitutionnel", "Q-O2", "organization"),
        ("Commission Europeenne", "Q-O3", "organization"), ("Marseille", "Q-L1", "location"),
        ("Kiev", "Q-L2", "location"), ("Damas", "Q-L3", "location")]

TOPICS = [
    ("climate", "climate change warming emissions carbon", ["climate", "warming", "emissions", "carbon", "drought",
                                                            "heatwave"]),
    ("corruption", "corruption political scandal bribery", ["corruption", "bribery", "embezzlement", "scandal",
                                                            "prosecutors"]),
    ("covid_economy", "covid economy recession unemployment", ["covid", "recession", "unemployment", "furlough",
                                                              "bankruptcies"]),
    ("covid_health", "covid hospital vaccine epidemic", ["covid", "hospital", "vaccine", "epidemic", "intensive",
                                                        "vaccination"]),
    ("yellow_vests", "yellow vests protest roundabout", ["yellow", "vests", "roundabout", "protesters", "fuel"]),
    ("immigration", "immigration migrants asylum border", ["immigration", "migrants", "asylum", "border",
                                                          "refugees"]),
    ("purchasing_power", "purchasing power prices wages inflation", ["purchasing", "prices", "wages", "inflation",
                                                                    "groceries"]),
    ("syria_war", "syria war damascus rebels", ["syria", "damascus", "rebels", "airstrikes", "ceasefire"]),
    ("ukraine_war", "ukraine war russia invasion", ["ukraine", "invasion", "russia", "troops", "shelling"]),
    ("ukraine_economy", "ukraine war energy prices sanctions gas", ["ukraine", "sanctions", "gas", "energy",
                                                                   "shortages"]),
]

POSITIVE = ["praised", "welcomed", "celebrated", "applauded"]
NEGATIVE = ["criticized", "condemned", "attacked", "blamed"]
NEUTRAL_VERBS = ["discussed", "mentioned", "addressed", "commented on", "spoke about"]

FILLER = [
    "The session lasted until late in the evening and several amendments were examined",
    "Observers expect the debate to continue over the coming weeks in both chambers",
    "Local officials said the schedule would be published on the official website",
    "The committee will meet again next month to review the remaining proposals",
    "Analysts noted that turnout in the region had been unusually stable this year",
    "Several associations asked for more transparency about the budget allocation",
]


def make_people(rng):
    names = set()
    people = []

    def fresh_name(gender):
        while True:
            first = rng.choice(FIRST_M if gender == "male" else FIRST_F if gender == "female" else
                               FIRST_M + FIRST_F)
            name = f"{first} {rng.choice(LAST)}"
            if name not in names:
                names.add(name)
                return name

    genders = ["male"] * 22 + ["female"] * 15 + ["other", "unknown", "unknown"]
    party_ids = [p[0] for p in PARTIES]
    for i, gender in enumerate(genders):
        pid = f"Q-{1000 + i}"
        n_parties = rng.choice([1, 1, 1, 2])
        parties = rng.sample(party_ids, n_parties)
        birth = None
        if rng.random() > 0.15:
            birth = f"{rng.randint(1945, 1992)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
        people.append({"kb_id": pid, "name": fresh_name(gender), "gender": gender, "birth_date": birth,
                       "country": "BE" if "Q-P10" in parties else "FR", "is_politician": True,
                       "party_ids": parties})
    # politician with no party at all
    people.append({"kb_id": "Q-1040", "name": fresh_name("female"), "gender": "female", "birth_date": "1970-02-28",
                   "country": "FR", "is_politician": True, "party_ids": []})
    # politician whose recorded birth date is after some publications
    people.append({"kb_id": "Q-1041", "name": fresh_name("male"), "gender": "male", "birth_date": "2019-06-15",
                   "country": "FR", "is_politician": True, "party_ids": ["Q-P4"]})
    for i in range(14):
        gender = rng.choice(["male", "female"])
        people.append({"kb_id": f"Q-2{i:03d}", "name": fresh_name(gender), "gender": gender,
                       "birth_date": f"{rng.randint(1950, 1995)}-0{rng.randint(1, 9)}-1{rng.randint(0, 9)}",
                       "country": rng.choice(["FR", "FR", "BE", "CH", ""]), "is_politician": False,
                       "party_ids": []})
    return people


def person_sentence(rng, people, topic_words):
    k = 2 if rng.random() < 0.3 else 1
    who = rng.sample(people, k)
    subject = " and ".join(p["name"] for p in who)
    roll = rng.random()
    if roll < 0.3:
        verb = rng.choice(POSITIVE)
    elif roll < 0.6:
        verb = rng.choice(NEGATIVE)
    else:
        verb = rng.choice(NEUTRAL_VERBS)
    topic = " ".join(rng.sample(topic_words, min(2, len(topic_words)))) if topic_words else "the reform"
    return f"{subject} {verb} the plan on {topic} during a meeting with reporters."


def document_body(rng, people, orgs, topic_sets):
    words = [w for t in topic_sets for w in t[2]]
    sentences = []
    for _ in range(rng.randint(3, 6)):
        sentences.append(person_sentence(rng, people, words))
    if rng.random() < 0.5:
        org = rng.choice(orgs)
        sentences.append(f"A statement from {org[0]} followed the announcement.")
    for _ in range(rng.randint(1, 3)):
        sentences.append(rng.choice(FILLER) + ".")
    if words:
        sentences.append("The questions of " + ", ".join(rng.sample(words, min(3, len(words)))) +
                         " dominated the coverage.")
    rng.shuffle(sentences)
    return " ".join(sentences)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=20240611)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "tests/fixtures/pipeline")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    people = make_people(rng)
    # mentioned people, with skewed popularity
    weighted = []
    for i, p in enumerate(people):
        weighted += [p] * max(1, 12 - i // 4)
    # a person the gazetteer knows but the snapshot does not
    ghost = {"kb_id": "Q-9999", "name": "Honore Ghislain"}

    docs = []
    doc_n = 0

    def add_doc(outlet, domain, date, title, body):
        nonlocal doc_n
        doc_n += 1
        doc_id = f"d{doc_n:04d}"
        docs.append({"doc_id": doc_id, "url": f"https://{domain}/{date[:4]}/{doc_id}", "domain": domain,
                     "outlet": outlet, "published_at": date, "title": title, "body": body})
        return docs[-1]

    for _ in range(200):
        o = rng.choices(range(len(OUTLETS)), weights=OUTLET_WEIGHTS)[0]
        outlet, domain, _ = OUTLETS[o]
        year = rng.randint(2016, 2022)
        date = f"{year}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
        n_topics = rng.choice([0, 1, 1, 2])
        topic_sets = rng.sample(TOPICS, n_topics)
        cast = list({p["kb_id"]: p for p in rng.sample(weighted, 8)}.values())[:6]
        if rng.random() < 0.05:
            cast.append(ghost)
        body = document_body(rng, cast, ORGS, topic_sets)
        title_words = topic_sets[0][2][:2] if topic_sets else ["politics"]
        title = f"{cast[0]['name']} and the {' '.join(title_words)} question"
        add_doc(outlet, domain, date, title, body)

    # short documents, dropped by the length filter
    for i in range(14):
        outlet, domain, _ = OUTLETS[i % len(OUTLETS)]
        p = rng.choice(weighted)
        add_doc(outlet, domain, f"{rng.randint(2016, 2022)}-0{rng.randint(1, 9)}-15", "Brief",
                f"{p['name']} praised the plan. Short note.")

    # near duplicates: same domain, small edit, later date
    originals = rng.sample(docs[:200], 18)
    for src in originals:
        words = src["body"].split(" ")
        j = rng.randrange(len(words))
        words[j] = words[j] + " indeed"
        y, m, d = src["published_at"].split("-")
        later = f"{y}-{m}-{min(28, int(d) + 1):02d}"
        add_doc(src["outlet"], src["domain"], later, src["title"] + " (update)", " ".join(words))
    # identical text republished on another domain: must survive
    for src in rng.sample(originals, 3):
        others = [o for o in OUTLETS if o[1] != src["domain"]]
        outlet, domain, _ = rng.choice(others)
        add_doc(outlet, domain, src["published_at"], src["title"], src["body"])

    rng.shuffle(docs)

    def dump_jsonl(path, rows):
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            for r in rows:
                f.write(json.dumps(r, ensure_ascii=False) + "\n")

    def dump_json(path, value):
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(value, f, ensure_ascii=False, indent=2)
            f.write("\n")

    dump_jsonl(out / "raw_corpus.jsonl", docs)
    dump_json(out / "outlets.json", {o: {"leaning": lean} for o, _, lean in OUTLETS})
    dump_jsonl(out / "persons.jsonl", people)
    dump_jsonl(out / "parties.jsonl", [{"party_kb_id": p, "name": n, "country": c, "left_right": lr}
                                       for p, n, c, lr, _ in PARTIES])
    with open(out / "crosswalk.csv", "w", newline="\n") as f:
        f.write("encyclopedia_party_id,parlgov_party_id\n")
        for p, *_, crosswalked in PARTIES:
            if crosswalked:
                f.write(f"{p},{p}\n")
    gazetteer = {p["name"]: p["kb_id"] for p in people}
    gazetteer[ghost["name"]] = ghost["kb_id"]
    for surface, kb_id, etype in ORGS:
        gazetteer[surface] = {"kb_id": kb_id, "entity_type": etype}
    dump_json(out / "gazetteer.json", dict(sorted(gazetteer.items())))
    rules = [{"cue": w, "class": "positive"} for w in POSITIVE] + [{"cue": w, "class": "negative"} for w in NEGATIVE]
    dump_json(out / "sentiment_rules.json", rules)
    dump_json(out / "topics.json", [{"topic_id": t, "query_text": q, "threshold": 2.0} for t, q, _ in TOPICS])
    dump_json(out / "config.json", {
        "paths": {"corpus": "raw_corpus.jsonl", "outlets": "outlets.json", "persons": "persons.jsonl",
                  "parties": "parties.jsonl", "crosswalk": "crosswalk.csv", "topics": "topics.json",
                  "gazetteer": "gazetteer.json", "sentiment_rules": "sentiment_rules.json"},
        "output_dir": "out",
        "seed": 7,
        "threads": 1,
        "window": {"start": "2016-01-01", "end": "2022-12-31"},
        "ingest": {"min_length": 200},
        "dedup": {"shingle_size": 5, "permutations": 256, "threshold": 0.5},
        "link_threshold": -0.2,
        "analytics": {"similarity_floor": 3, "stability_top_k": 1000},
    })


if __name__ == "__main__":
    main()
