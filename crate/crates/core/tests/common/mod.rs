#![allow(dead_code)]

use std::collections::BTreeSet;

use chrono::NaiveDate;
use jobgap::{Corpus, Document, DocumentKind};

/// Half-year job-post counts for 2016H1..2021H2, one row per technology,
/// as published for the Swedish SE job market.
pub const PUBLISHED_COUNTS: [(&str, [usize; 12]); 24] = [
    ("Java", [1182, 1313, 1506, 1523, 1510, 1544, 1731, 1612, 1872, 1760, 2871, 3364]),
    ("C#", [1201, 1244, 1491, 1436, 1477, 1566, 1746, 1554, 1518, 1467, 2200, 2660]),
    ("SQL", [1209, 1182, 1359, 1213, 1320, 1271, 1459, 1216, 1563, 1551, 2348, 2854]),
    ("JavaScript", [1089, 1300, 1339, 1172, 1211, 1266, 1513, 1312, 1674, 1483, 2154, 2567]),
    ("Python", [430, 531, 676, 749, 690, 756, 887, 967, 1143, 1158, 2002, 2307]),
    ("C++", [910, 1034, 1176, 1193, 1285, 1265, 1441, 1269, 1171, 1167, 1903, 2162]),
    (".NET Framework", [935, 987, 1187, 1049, 1244, 1206, 1395, 1233, 1311, 1248, 1866, 2237]),
    ("Git", [467, 537, 625, 702, 800, 787, 889, 821, 1032, 894, 1537, 1932]),
    ("Docker", [99, 152, 194, 208, 274, 345, 419, 492, 616, 601, 1074, 1459]),
    ("HTML/CSS", [930, 985, 979, 858, 846, 908, 1038, 909, 995, 893, 1183, 1492]),
    ("Angular", [238, 318, 403, 460, 466, 491, 580, 546, 791, 755, 1032, 1361]),
    ("Kubernetes", [3, 6, 16, 35, 69, 146, 230, 244, 394, 443, 970, 1291]),
    ("TypeScript", [25, 60, 120, 127, 202, 226, 273, 295, 384, 446, 844, 1163]),
    ("Node.js", [160, 228, 235, 248, 250, 316, 318, 382, 509, 541, 853, 990]),
    ("NoSQL", [194, 214, 262, 220, 261, 261, 266, 286, 382, 373, 770, 800]),
    ("Spring", [160, 158, 176, 186, 191, 202, 253, 234, 350, 345, 530, 723]),
    ("Android", [334, 346, 360, 460, 412, 353, 469, 384, 359, 339, 566, 648]),
    ("PHP", [368, 400, 377, 287, 307, 292, 309, 246, 376, 346, 429, 553]),
    ("iOS", [265, 296, 262, 310, 278, 209, 290, 287, 274, 255, 399, 423]),
    ("Kotlin", [0, 1, 8, 33, 64, 67, 141, 115, 138, 142, 392, 452]),
    ("Matlab", [134, 169, 153, 168, 162, 195, 204, 211, 182, 148, 310, 365]),
    ("ASP.NET", [263, 266, 278, 238, 222, 260, 316, 277, 242, 202, 252, 342]),
    ("React.js", [65, 69, 85, 103, 70, 95, 106, 104, 132, 141, 238, 312]),
    ("Terraform", [7, 8, 13, 8, 9, 8, 17, 22, 69, 62, 162, 277]),
];

pub const PUBLISHED_TOTALS: [usize; 12] =
    [4429, 4601, 5193, 5200, 6112, 6115, 6446, 5700, 7558, 6537, 10457, 12649];

pub fn published_row(skill: &str) -> [usize; 12] {
    PUBLISHED_COUNTS.iter().find(|(s, _)| *s == skill).expect("row in table").1
}

/// Least squares by direct minimization, without the normal-equation closed
/// form: nested bisection on the sign of the squared-error gradient. The
/// inner search finds the best intercept for a fixed slope, the outer
/// search finds the slope where the profiled gradient vanishes.
pub fn brute_force_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let y_abs = points.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let y_span = points.iter().map(|p| p.1).fold(f64::MIN, f64::max)
        - points.iter().map(|p| p.1).fold(f64::MAX, f64::min);
    let x_abs = points.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    let min_dx = xs.windows(2).map(|w| w[1] - w[0]).filter(|d| *d > 0.0).fold(f64::MAX, f64::min);
    let slope_bound = 2.0 * (y_span + 1.0) / min_dx * points.len() as f64;

    let best_intercept = |m: f64| {
        // d/db of SSE/2 is increasing in b
        let grad = |b: f64| points.iter().map(|&(x, y)| m * x + b - y).sum::<f64>();
        let bound = y_abs + m.abs() * x_abs + 1.0;
        bisect(-bound, bound, grad)
    };
    let slope_grad = |m: f64| {
        let b = best_intercept(m);
        points.iter().map(|&(x, y)| x * (m * x + b - y)).sum::<f64>()
    };
    let m = bisect(-slope_bound, slope_bound, slope_grad);
    (m, best_intercept(m))
}

/// Root of an increasing function on [lo, hi], to floating-point resolution.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // pick the endpoint with the smaller gradient magnitude
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

fn is_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '#' || c == '+' || c == '.'
}

/// Character-by-character scan for every keyword at every position.
pub fn naive_scan(text: &str, dict: &[(&str, &[&str])]) -> BTreeSet<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = BTreeSet::new();
    for (skill, keywords) in dict {
        'kw: for kw in keywords.iter() {
            let k: Vec<char> = kw.chars().collect();
            if k.len() > chars.len() {
                continue;
            }
            for i in 0..=chars.len() - k.len() {
                let same = (0..k.len()).all(|j| chars[i + j].eq_ignore_ascii_case(&k[j]));
                if !same {
                    continue;
                }
                let left = i == 0 || !is_ident(chars[i - 1]);
                let after = chars.get(i + k.len()).copied();
                let after2 = chars.get(i + k.len() + 1).copied();
                let right = match after {
                    None => true,
                    Some('.') => match after2 {
                        None => true,
                        Some(c) => !c.is_alphanumeric(),
                    },
                    Some(c) => !is_ident(c),
                };
                if left && right {
                    out.insert(skill.to_string());
                    break 'kw;
                }
            }
        }
    }
    out
}

/// 40 keywords over 20 skills, heavy on prefixes, punctuation and overlaps.
pub const ORACLE_DICT: [(&str, &[&str]); 20] = [
    ("Java", &["Java", "J2EE"]),
    ("JavaScript", &["JavaScript", "JS", "ECMAScript"]),
    ("TypeScript", &["TypeScript", "TS"]),
    ("Node.js", &["Node.js", "NodeJS", "Node"]),
    (".NET Framework", &[".NET", ".NET Core"]),
    ("ASP.NET", &["ASP.NET", "ASP"]),
    ("C++", &["C++"]),
    ("C#", &["C#", "CSharp"]),
    ("F#", &["F#"]),
    ("HTML/CSS", &["HTML", "HTML5", "CSS", "CSS3"]),
    ("SQL", &["SQL", "T-SQL"]),
    ("NoSQL", &["NoSQL", "MongoDB"]),
    ("Python", &["Python"]),
    ("Git", &["Git", "GitHub"]),
    ("Docker", &["Docker"]),
    ("Kubernetes", &["Kubernetes", "K8s"]),
    ("Spring", &["Spring", "Spring Boot"]),
    ("React.js", &["React", "React.js"]),
    ("Apache Spark", &["Apache Spark", "Spark"]),
    ("Bash/Shell", &["Bash", "Shell"]),
];

pub fn oracle_dictionary() -> jobgap::SkillDictionary {
    let entries = ORACLE_DICT
        .iter()
        .map(|(name, kws)| jobgap::SkillEntry {
            name: name.to_string(),
            category: String::new(),
            keywords: kws.iter().map(|k| k.to_string()).collect(),
        })
        .collect();
    jobgap::SkillDictionary::new(entries, vec!["C".into(), "R".into(), "Go".into()]).unwrap()
}

/// Fragments for random texts: keywords, near misses and separators.
pub const FRAGMENTS: &[&str] = &[
    "Java", "java", "JAVA", "JavaScript", "javascript", "JS", "js", "Node.js", "node", "NodeJS",
    ".NET", ".net", "ASP.NET", "asp", "C++", "c++", "C#", "c#", "F#", "CPP", "HTML", "HTML5",
    "html5", "CSS", "CSS3", "SQL", "T-SQL", "MySQL", "NoSQL", "mongodb", "Python", "Py", "py3",
    "Git", "github", "GitLab", "Docker", "dockerfile", "Kubernetes", "k8s", "Spring", "Spring Boot",
    "springtime", "React", "React.js", "Reactive", "Spark", "Apache Spark", "Bash", "Shell", "shellcode",
    "TypeScript", "TS", "ts", "dotnet", "J2EE", "JVM", "Go", "C", "R", "och", "för", "åäö",
    "utvecklare", "developer", "with", "and", "e.g", "5", "3", "x", "Script", "Core", "ö",
];

pub const SEPARATORS: &[&str] =
    &["", " ", "  ", ", ", ".", ". ", "..", "(", ")", "/", "\n", "-", "#", "+", ";", ":", "!", "'", "\t", "_"];

pub fn day(s: &str) -> NaiveDate {
    s.parse().unwrap()
}

/// Deterministic synthetic job-post corpus of `n` documents spread over
/// 2016..2021 with keyword mentions drawn from a fixed linear-congruential
/// sequence.
pub fn synthetic_job_corpus(n: usize) -> Corpus {
    const SNIPPETS: &[&str] = &[
        "Java", "JavaScript", "C#", "C++", "SQL", "Python", "Docker", "Kubernetes", "HTML5", "CSS",
        "Node.js", "ASP.NET", ".NET", "TypeScript", "Git", "Angular", "PHP", "Terraform", "Kotlin",
        "React", "iOS", "Android", "NoSQL", "Spring Boot", "Matlab", "Go", "R",
    ];
    let mut state: u64 = 0x2545_f491_4f6c_dd1d;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as usize
    };
    let start = day("2016-01-01");
    let mut docs = Vec::with_capacity(n);
    for i in 0..n {
        let offset = next() % 2192;
        let date = start + chrono::Duration::days(offset as i64);
        let mut text = String::from("Vi söker en systemutvecklare. ");
        let mentions = 1 + next() % 6;
        for _ in 0..mentions {
            text.push_str("Erfarenhet av ");
            text.push_str(SNIPPETS[next() % SNIPPETS.len()]);
            text.push_str(if next() % 3 == 0 { ". " } else { ", " });
        }
        text.push_str("Välkommen med din ansökan!");
        docs.push(Document::job_post(format!("ad-{i:06}"), text, date).with_source("synthetic"));
    }
    Corpus::from_documents(DocumentKind::JobPost, docs).unwrap()
}
