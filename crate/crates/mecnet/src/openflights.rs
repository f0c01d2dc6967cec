//! OpenFlights `airports.dat` / `routes.dat` ingestion.
//!
//! Cities are nodes keyed by `(city, country)`, countries are QNets, and an
//! undirected international route is an inter-link.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use mecnet_core::{Graph, InterQNet, QNetPartition};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub type City = (String, String);

/// One undirected international link; `source <= dest` as `(city, country)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlightRecord {
    pub source_city: String,
    pub source_country: String,
    pub dest_city: String,
    pub dest_country: String,
}

impl FlightRecord {
    fn endpoints(&self) -> (City, City) {
        (
            (self.source_city.clone(), self.source_country.clone()),
            (self.dest_city.clone(), self.dest_country.clone()),
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    pub airports: usize,
    pub airports_malformed: usize,
    pub routes: usize,
    pub routes_malformed: usize,
    pub join_failures: usize,
    pub domestic: usize,
    /// Distinct cities touched by at least one joined route.
    pub route_cities: usize,
    /// Distinct undirected city pairs over all joined routes.
    pub route_city_pairs: usize,
    pub international: usize,
    pub airports_sha256: String,
    pub routes_sha256: String,
}

#[derive(Clone, Debug)]
pub struct Dataset {
    pub records: Vec<FlightRecord>,
    pub report: ParseReport,
}

fn reader(bytes: &[u8]) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(bytes)
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn field(s: &str) -> Option<&str> {
    let s = s.trim();
    (!s.is_empty() && s != "\\N").then_some(s)
}

pub fn parse_openflights(airports_path: &Path, routes_path: &Path) -> Result<Dataset> {
    let airports = std::fs::read(airports_path).map_err(|e| Error::io(airports_path, e))?;
    let routes = std::fs::read(routes_path).map_err(|e| Error::io(routes_path, e))?;
    parse_bytes(&airports, &routes)
}

/// Joins routes to airports on the numeric airport ids (columns 3 and 5 of
/// a route, column 0 of an airport).
pub fn parse_bytes(airports: &[u8], routes: &[u8]) -> Result<Dataset> {
    let mut report = ParseReport {
        airports_sha256: sha256_hex(airports),
        routes_sha256: sha256_hex(routes),
        ..Default::default()
    };
    let mut by_id: HashMap<u64, City> = HashMap::new();
    for row in reader(airports).records() {
        report.airports += 1;
        let parsed = row.ok().and_then(|r| {
            let id = field(r.get(0)?)?.parse().ok()?;
            let city = field(r.get(2)?)?.to_string();
            let country = field(r.get(3)?)?.to_string();
            Some((id, (city, country)))
        });
        match parsed {
            Some((id, city)) => {
                by_id.insert(id, city);
            }
            None => report.airports_malformed += 1,
        }
    }

    let mut cities = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    let mut international = BTreeSet::new();
    for row in reader(routes).records() {
        report.routes += 1;
        let ids = row.ok().and_then(|r| {
            let a: Option<u64> = field(r.get(3)?).and_then(|s| s.parse().ok());
            let b: Option<u64> = field(r.get(5)?).and_then(|s| s.parse().ok());
            Some((a, b))
        });
        let Some((a, b)) = ids else {
            report.routes_malformed += 1;
            continue;
        };
        let (Some(a), Some(b)) = (a.and_then(|a| by_id.get(&a)), b.and_then(|b| by_id.get(&b))) else {
            report.join_failures += 1;
            continue;
        };
        if a == b {
            continue;
        }
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        cities.insert(lo.clone());
        cities.insert(hi.clone());
        pairs.insert((lo.clone(), hi.clone()));
        if lo.1 == hi.1 {
            report.domestic += 1;
            continue;
        }
        international.insert(FlightRecord {
            source_city: lo.0.clone(),
            source_country: lo.1.clone(),
            dest_city: hi.0.clone(),
            dest_country: hi.1.clone(),
        });
    }
    report.route_cities = cities.len();
    report.route_city_pairs = pairs.len();
    report.international = international.len();
    Ok(Dataset {
        records: international.into_iter().collect(),
        report,
    })
}

/// Country names of the 27 EU member states as spelled in OpenFlights.
pub const EU_COUNTRIES: [&str; 27] = [
    "Austria",
    "Belgium",
    "Bulgaria",
    "Croatia",
    "Cyprus",
    "Czech Republic",
    "Denmark",
    "Estonia",
    "Finland",
    "France",
    "Germany",
    "Greece",
    "Hungary",
    "Ireland",
    "Italy",
    "Latvia",
    "Lithuania",
    "Luxembourg",
    "Malta",
    "Netherlands",
    "Poland",
    "Portugal",
    "Romania",
    "Slovakia",
    "Slovenia",
    "Spain",
    "Sweden",
];

#[derive(Clone, Debug)]
pub struct RealInstance {
    pub iq: InterQNet,
    /// City of each vertex id.
    pub cities: Vec<City>,
    /// Country of each QNet index.
    pub countries: Vec<String>,
    pub edges_available: usize,
    pub dropped_vertices: usize,
}

/// Restricts to `country_filter`, optionally samples `edge_count` links
/// uniformly with `seed`, and keeps the largest connected component (ties
/// go to the one containing the smallest city).
pub fn build_real_instance(
    records: &[FlightRecord],
    country_filter: Option<&BTreeSet<String>>,
    subsample: Option<(usize, u64)>,
) -> Result<RealInstance> {
    let kept: Vec<&FlightRecord> = records
        .iter()
        .filter(|r| {
            country_filter.is_none_or(|f| f.contains(&r.source_country) && f.contains(&r.dest_country))
        })
        .collect();
    if kept.is_empty() {
        return Err(Error::Empty("no international routes left after filtering".into()));
    }
    let edges_available = kept.len();
    let chosen: Vec<&FlightRecord> = match subsample {
        None => kept,
        Some((count, seed)) => {
            if count > kept.len() {
                return Err(mecnet_core::Error::NotEnoughPairs {
                    requested: count,
                    available: kept.len(),
                }
                .into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = index::sample(&mut rng, kept.len(), count).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| kept[i]).collect()
        }
    };

    let mut ids: BTreeMap<City, usize> = BTreeMap::new();
    for r in &chosen {
        let (a, b) = r.endpoints();
        ids.entry(a).or_insert(0);
        ids.entry(b).or_insert(0);
    }
    for (i, v) in ids.values_mut().enumerate() {
        *v = i;
    }
    let all: Vec<City> = ids.keys().cloned().collect();
    let mut g = Graph::new(all.len());
    for r in &chosen {
        let (a, b) = r.endpoints();
        g.add_edge(ids[&a], ids[&b])?;
    }
    let comps = g.components();
    let largest = comps
        .iter()
        .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
        .expect("at least one record");
    let dropped_vertices = all.len() - largest.len();

    let cities: Vec<City> = largest.iter().map(|&v| all[v].clone()).collect();
    let countries: Vec<String> = cities
        .iter()
        .map(|c| c.1.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let q_of: HashMap<&str, usize> = countries.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let mut local = vec![usize::MAX; all.len()];
    for (i, &v) in largest.iter().enumerate() {
        local[v] = i;
    }
    let mut graph = Graph::new(cities.len());
    for e in g.edges() {
        if local[e.0] != usize::MAX {
            graph.add_edge(local[e.0], local[e.1])?;
        }
    }
    let membership: Vec<usize> = cities.iter().map(|c| q_of[c.1.as_str()]).collect();
    let partition = QNetPartition::from_membership(&membership)?;
    let iq = InterQNet::new(graph, partition)?;
    Ok(RealInstance {
        iq,
        cities,
        countries,
        edges_available,
        dropped_vertices,
    })
}

/// One JSON line describing an ingested instance.
#[derive(Clone, Debug, Serialize)]
pub struct IngestMetadata<'a> {
    pub kind: &'static str,
    pub airports_sha256: &'a str,
    pub routes_sha256: &'a str,
    pub filter: Option<Vec<String>>,
    pub subsample: Option<(usize, u64)>,
    pub nodes: usize,
    pub edges: usize,
    pub qnets: usize,
    pub countries: &'a [String],
    pub edges_available: usize,
    pub dropped_vertices: usize,
    pub report: &'a ParseReport,
}

#[cfg(test)]
mod tests {
    use super::*;

    const AIRPORTS: &str = "\
1,\"Alpha Intl\",\"Paris\",\"France\",\"AAA\",\"AAAA\",0,0,0,0,\"E\",\"x\",\"airport\",\"OurAirports\"
2,\"Beta\",\"Paris\",\"France\",\"BBB\",\"BBBB\",0,0,0,0,\"E\",\"x\",\"airport\",\"OurAirports\"
3,\"Gamma\",\"Berlin\",\"Germany\",\"CCC\",\"CCCC\",0,0,0,0,\"E\",\"x\",\"airport\",\"OurAirports\"
4,\"Delta\",\"Lyon\",\"France\",\"DDD\",\"DDDD\",0,0,0,0,\"E\",\"x\",\"airport\",\"OurAirports\"
5,\"Eps\",\"Zurich\",\"Switzerland\",\"EEE\",\"EEEE\",0,0,0,0,\"E\",\"x\",\"airport\",\"OurAirports\"
bad row
";
    const ROUTES: &str = "\
XX,1,AAA,1,CCC,3,,0,320
XX,1,CCC,3,BBB,2,,0,320
XX,1,AAA,1,DDD,4,,0,320
XX,1,DDD,4,EEE,5,,0,320
XX,1,CCC,3,EEE,5,,0,320
XX,1,AAA,1,ZZZ,\\N,,0,320
XX,1,AAA,1,QQQ,99,,0,320
";

    #[test]
    fn join_collapse_and_filter() {
        let ds = parse_bytes(AIRPORTS.as_bytes(), ROUTES.as_bytes()).unwrap();
        let r = &ds.report;
        assert_eq!((r.airports, r.airports_malformed), (6, 1));
        assert_eq!((r.routes, r.join_failures, r.domestic), (7, 2, 1));
        // Paris-Berlin twice (both directions, two Paris airports) collapses to one
        assert_eq!(ds.records.len(), 3);
        assert_eq!(r.route_cities, 4);
        let inst = build_real_instance(&ds.records, None, None).unwrap();
        assert_eq!(inst.iq.data_count(), 4);
        assert_eq!(inst.countries, vec!["France", "Germany", "Switzerland"]);
        assert_eq!(inst.dropped_vertices, 0);
        // the domestic Paris-Lyon route is not an inter-link
        assert_eq!(inst.iq.graph().edge_count(), 3);
    }

    #[test]
    fn filters_and_subsampling() {
        let ds = parse_bytes(AIRPORTS.as_bytes(), ROUTES.as_bytes()).unwrap();
        let fr_de: BTreeSet<String> = ["France", "Germany"].iter().map(|s| s.to_string()).collect();
        let inst = build_real_instance(&ds.records, Some(&fr_de), None).unwrap();
        assert_eq!(inst.iq.partition().k(), 2);
        assert!(build_real_instance(&ds.records, None, Some((4, 1))).is_err());
        let none: BTreeSet<String> = ["Peru".to_string()].into();
        assert!(matches!(build_real_instance(&ds.records, Some(&none), None), Err(Error::Empty(_))));
    }
}
