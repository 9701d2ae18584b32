"""Writes a synthetic extract with the census column layout."""
import random
import sys

EDUCATION = ["Preschool", "1st-4th", "5th-6th", "7th-8th", "9th", "10th", "11th", "12th",
             "HS-grad", "Some-college", "Assoc-acdm", "Assoc-voc", "Bachelors", "Masters",
             "Prof-school", "Doctorate"]
WORK = ["Private", "Self-emp-not-inc", "Local-gov", "State-gov", "?"]
MARITAL = ["Never-married", "Married-civ-spouse", "Divorced", "Widowed"]
OCCUPATION = ["Tech-support", "Craft-repair", "Sales", "Exec-managerial", "?"]
RELATIONSHIP = ["Husband", "Wife", "Own-child", "Not-in-family", "Unmarried"]
RACE = ["White", "Black", "Asian-Pac-Islander", "Other"]
COUNTRY = ["United-States", "Mexico", "India", "?"]


def row(rng, i):
    age = rng.randint(17, 90)
    grade = min(15, max(0, int(rng.gauss(9.5, 3))))
    sex = rng.choice(["Male", "Female"])
    score = (grade - 8) * 0.4 + (1.0 if 35 <= age <= 60 else -0.5) + (0.4 if sex == "Male" else 0)
    income = ">50K" if rng.random() < 1 / (1 + 2.718 ** (1.5 - score)) else "<=50K"
    if i in (17, 111):
        sex = "?"
    return [age, rng.choice(WORK), rng.randint(20000, 500000), EDUCATION[grade], grade + 1,
            rng.choice(MARITAL), rng.choice(OCCUPATION), rng.choice(RELATIONSHIP),
            rng.choice(RACE), sex, rng.choice([0, 0, 0, 2174]), 0, rng.randint(10, 60),
            rng.choice(COUNTRY), income]


def main():
    rng = random.Random(1994)
    out = sys.stdout
    for i in range(200):
        out.write(", ".join(str(v) for v in row(rng, i)) + "\n")


if __name__ == "__main__":
    main()
