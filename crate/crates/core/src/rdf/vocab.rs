//! Well-known namespaces and terms.

pub mod rdf {
    use crate::rdf::Iri;

    pub const NAMESPACE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
    pub const TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";

    pub fn type_() -> Iri {
        Iri::from_trusted(TYPE)
    }

    pub fn lang_string() -> Iri {
        Iri::from_trusted(LANG_STRING)
    }
}

pub mod xsd {
    use crate::rdf::Iri;

    pub const NAMESPACE: &str = "http://www.w3.org/2001/XMLSchema#";
    pub const STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
    pub const INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
    pub const DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
    pub const DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
    pub const FLOAT: &str = "http://www.w3.org/2001/XMLSchema#float";
    pub const BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
    pub const DATE: &str = "http://www.w3.org/2001/XMLSchema#date";

    pub fn string() -> Iri {
        Iri::from_trusted(STRING)
    }
    pub fn integer() -> Iri {
        Iri::from_trusted(INTEGER)
    }
    pub fn decimal() -> Iri {
        Iri::from_trusted(DECIMAL)
    }
    pub fn double() -> Iri {
        Iri::from_trusted(DOUBLE)
    }
    pub fn boolean() -> Iri {
        Iri::from_trusted(BOOLEAN)
    }
    pub fn date() -> Iri {
        Iri::from_trusted(DATE)
    }

    pub fn is_numeric(datatype: &str) -> bool {
        matches!(datatype, INTEGER | DECIMAL | DOUBLE | FLOAT)
    }
}

pub mod rdfs {
    pub const NAMESPACE: &str = "http://www.w3.org/2000/01/rdf-schema#";
}

pub mod owl {
    pub const NAMESPACE: &str = "http://www.w3.org/2002/07/owl#";
}

pub mod rr {
    pub const NAMESPACE: &str = "http://www.w3.org/ns/r2rml#";
}

pub const NCIT_NAMESPACE: &str = "http://purl.obolibrary.org/obo/NCIT_";
pub const ROO_NAMESPACE: &str = "http://www.cancerdata.org/roo/";
