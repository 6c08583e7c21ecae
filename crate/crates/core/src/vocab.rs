//! Namespace constants for the vocabularies the toolkit reads and writes.

macro_rules! terms {
    ($ns:literal; $($name:ident = $local:literal),* $(,)?) => {
        pub const NS: &str = $ns;
        $(
            pub fn $name() -> $crate::rdf::Iri {
                $crate::rdf::Iri::new(concat!($ns, $local)).expect("static vocabulary IRI")
            }
        )*
    };
}

pub mod oac {
    terms! { "http://www.openannotation.org/ns/";
        annotation = "Annotation",
        reply = "Reply",
        body = "Body",
        target = "Target",
        has_body = "hasBody",
        has_target = "hasTarget",
        constrained_target = "ConstrainedTarget",
        constrained_body = "ConstrainedBody",
        constrains = "constrains",
        has_constraint = "hasConstraint",
        constraint = "Constraint",
        svg_constraint = "SvgConstraint",
        web_time_constraint = "WebTimeConstraint",
        when = "when",
    }
}

pub mod dcterms {
    terms! { "http://purl.org/dc/terms/";
        created = "created",
        creator = "creator",
        is_part_of = "isPartOf",
        is_version_of = "isVersionOf",
        source = "source",
    }
}

pub mod dc {
    terms! { "http://purl.org/dc/elements/1.1/";
        title = "title",
        format = "format",
    }
}

pub mod cnt {
    terms! { "http://www.w3.org/2008/content#";
        chars = "chars",
        character_encoding = "characterEncoding",
        content_as_text = "ContentAsText",
        content_as_base64 = "ContentAsBase64",
        content_as_xml = "ContentAsXML",
    }
}

pub mod rdf {
    terms! { "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
        type_ = "type",
    }
}

pub mod owl {
    terms! { "http://www.w3.org/2002/07/owl#";
        same_as = "sameAs",
    }
}

pub mod foaf {
    terms! { "http://xmlns.com/foaf/0.1/";
        name = "name",
    }
}

pub mod xsd {
    terms! { "http://www.w3.org/2001/XMLSchema#";
        date_time = "dateTime",
        string = "string",
    }
}
