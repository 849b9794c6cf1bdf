// The MiniWiki corpus: 60 short articles about the fictional island nation
// of Veldoria, densely cross-referenced so most questions need two lookups,
// plus the question bank. Questions 0..19 are the bundled scenarios; 20 and
// 21 are reserved for the few-shot example files and never appear as seeds.
#pragma once

#include <string>
#include <vector>

namespace hicrl {

struct WikiArticle {
  const char* title;
  const char* text;
};

inline const std::vector<WikiArticle>& wiki_articles() {
  static const std::vector<WikiArticle> kArticles = {
      {"Veldoria",
       "Veldoria is an island nation in the Ceralt Sea. Its capital is Maribel City and its "
       "second-largest city is Dunmore. The country's highest peak is Mount Calder. The republic "
       "was declared in 1781, and the national bird is the copper finch."},
      {"Ceralt Sea",
       "The Ceralt Sea surrounds the island nation of Veldoria. It is known for the translucent "
       "glass squid. Its warmest waters follow the Ferris Current."},
      {"Maribel City",
       "Maribel City is the capital of Veldoria, built on the banks of the Soryn River. It is "
       "home to Ketter University, the Aldwyn Museum, and the Maribel Opera House. The Halden "
       "Bridge and the Maribel Clocktower are its best-known landmarks."},
      {"Soryn River",
       "The Soryn River is the longest river in Veldoria at 480 kilometers. It rises on Mount "
       "Calder and reaches the Ceralt Sea at the Port of Brindle. Its mouth forms the Soryn "
       "Delta."},
      {"Mount Calder",
       "Mount Calder is the highest peak in Veldoria at 2,140 meters. It stands in the Calder "
       "Range. The mountaineer Rosa Venn made the first ascent in 1903. The Ketter Observatory "
       "sits on its southern shoulder."},
      {"Calder Range",
       "The Calder Range is a mountain range in northern Veldoria. It contains Mount Calder and "
       "Lake Imre. The town of Hartsel lies at its foot."},
      {"Lake Imre",
       "Lake Imre is an alpine lake in the Calder Range. It is the source of the Tammen River. "
       "The lake is famous for its silver trout."},
      {"Tammen River",
       "The Tammen River is the second-longest river in Veldoria at 310 kilometers. It flows "
       "from Lake Imre to the city of Dunmore. The weaving town of Orrin sits on its middle "
       "course."},
      {"Dunmore",
       "Dunmore is an industrial city and the second-largest in Veldoria. It was founded in 1642 "
       "and grew around shipbuilding. The Dunmore Foundry and Dunmore Polytechnic are based "
       "there. Admiral Corin Vale was born in the city."},
      {"Port of Brindle",
       "The Port of Brindle is the chief seaport of Veldoria, at the mouth of the Soryn River. "
       "It exports copper and timber. The Brindle Marine Institute is located on its waterfront, "
       "and brindle ale has been brewed in the town since 1688."},
      {"Ketter University",
       "Ketter University is a university in Maribel City. It was founded in 1892 by the "
       "astronomer Ilsa Ketter. Its motto is Light from inquiry. The university operates the "
       "Ketter Observatory on Mount Calder."},
      {"Ilsa Ketter",
       "Ilsa Ketter (1844-1921) was a Veldorian astronomer and philanthropist. She discovered "
       "the comet Ketter-Marsh with Tobias Marsh in 1878. She founded Ketter University in "
       "1892."},
      {"Ketter Observatory",
       "The Ketter Observatory is an astronomical observatory on Mount Calder. It was built in "
       "1907 and is operated by Ketter University. It houses the Veldian Meridian Telescope."},
      {"Comet Ketter-Marsh",
       "Comet Ketter-Marsh is a periodic comet discovered in 1878 by Ilsa Ketter and Tobias "
       "Marsh. It returns every 61 years. Its last recorded apparition was widely observed from "
       "the Ketter Observatory."},
      {"Tobias Marsh",
       "Tobias Marsh (1839-1911) was a Veldorian astronomer. He co-discovered comet Ketter-Marsh "
       "in 1878. He taught astronomy at Dunmore Polytechnic for thirty years."},
      {"Aldwyn Museum",
       "The Aldwyn Museum is the national museum of Veldoria, located in Maribel City. It was "
       "founded in 1856. Its collection includes the crown of Queen Sabel, the Orrin Tapestry, "
       "and the Quill Codex."},
      {"Queen Sabel",
       "Queen Sabel (1741-1809) was the last monarch of Veldoria. She reigned from 1766 until "
       "the republic was declared in 1781. Her crown is displayed at the Aldwyn Museum. The "
       "Sabel Gardens in Maribel City were laid out for her."},
      {"Orrin Tapestry",
       "The Orrin Tapestry is a fourteenth-century tapestry depicting the Battle of Greyfen. It "
       "was woven in the town of Orrin. It hangs in the Aldwyn Museum."},
      {"Battle of Greyfen",
       "The Battle of Greyfen was a naval battle fought in 1347 between Veldoria and the Kingdom "
       "of Thessel. It took place off Cape Greyfen. The Veldorian fleet under Corin Vale won the "
       "battle."},
      {"Kingdom of Thessel",
       "The Kingdom of Thessel was a historical kingdom across the Ceralt Sea from Veldoria. Its "
       "capital was Thessel City. The kingdom dissolved in 1540."},
      {"Corin Vale",
       "Corin Vale (1301-1362) was a Veldorian admiral. He commanded the fleet that won the "
       "Battle of Greyfen in 1347. He was born in Dunmore."},
      {"Cape Greyfen",
       "Cape Greyfen is a headland on the southern coast of Veldoria. The Greyfen Lighthouse "
       "stands at its tip. The cape is the finish line of the Greyfen Regatta."},
      {"Greyfen Lighthouse",
       "The Greyfen Lighthouse is a lighthouse at Cape Greyfen, built in 1712. At 54 meters it "
       "is the tallest lighthouse in Veldoria."},
      {"Rosa Venn",
       "Rosa Venn (1871-1956) was a Veldorian mountaineer. She made the first ascent of Mount "
       "Calder in 1903. She founded the Venn Alpine Club in 1908."},
      {"Venn Alpine Club",
       "The Venn Alpine Club is a climbing club founded by Rosa Venn in 1908. Its headquarters "
       "are in Hartsel. The club's symbol is the Calder ibex."},
      {"Hartsel",
       "Hartsel is a mountain town at the foot of the Calder Range. It is the gateway for "
       "climbers heading to Mount Calder. The town hosts the Frostlight Festival each January, "
       "and imre pie originated there."},
      {"Frostlight Festival",
       "The Frostlight Festival is a winter festival held in Hartsel every January. Its "
       "centerpiece is ice lantern carving. Lanterns are carved from ice cut on Lake Imre."},
      {"Dunmore Foundry",
       "The Dunmore Foundry is an ironworks in Dunmore, opened in 1789. It cast the bell of the "
       "Maribel Clocktower. The foundry still produces ship fittings."},
      {"Maribel Clocktower",
       "The Maribel Clocktower is a clocktower in Maribel City, completed in 1801. It stands 63 "
       "meters tall. Its bell was cast at the Dunmore Foundry, and the tower was designed by "
       "Hetta Brandt."},
      {"Copper finch",
       "The copper finch is the national bird of Veldoria. It is a small songbird with metallic "
       "plumage. It nests along the Soryn River and winters in the Soryn Delta."},
      {"Glass squid",
       "The glass squid is a translucent squid found in the Ceralt Sea. Its light organs were "
       "first described by Nola Ferris. It is studied at the Brindle Marine Institute."},
      {"Brindle Marine Institute",
       "The Brindle Marine Institute is a marine research institute at the Port of Brindle. It "
       "was founded in 1931 by Nola Ferris. Its researchers study the glass squid and the Ferris "
       "Current."},
      {"Nola Ferris",
       "Nola Ferris (1898-1977) was a Veldorian marine biologist. She founded the Brindle Marine "
       "Institute in 1931. She first described the light organs of the glass squid, and the "
       "Ferris Current is named after her."},
      {"Silver trout",
       "The silver trout is a fish native to Lake Imre. It is prized in Veldorian cooking. It is "
       "the main ingredient of imre pie."},
      {"Imre pie",
       "Imre pie is a traditional Veldorian dish of silver trout baked in a rye crust. It "
       "originated in the town of Hartsel. The crust is made from Veldorian rye."},
      {"Veldorian rye",
       "Veldorian rye is a hardy grain grown on the Penn Plateau. It is used for the crust of "
       "imre pie. It is also the main grain in brindle ale."},
      {"Penn Plateau",
       "The Penn Plateau is a farming plateau in central Veldoria. Its chief crops are Veldorian "
       "rye and lavender. The plateau supplies the perfume trade of the Sabel Gardens."},
      {"Brindle ale",
       "Brindle ale is a dark ale brewed at the Port of Brindle since 1688. It is made with "
       "Veldorian rye. The ale is served at the Greyfen Regatta each year."},
      {"Thessel City",
       "Thessel City was the capital of the Kingdom of Thessel. It is now an archaeological "
       "site. Marta Quill led its excavation beginning in 1984, where the Quill Codex was "
       "found."},
      {"Marta Quill",
       "Marta Quill (born 1949) is a Veldorian archaeologist. She led the excavation of Thessel "
       "City from 1984. She discovered the Quill Codex in 1991 and is a professor at Ketter "
       "University."},
      {"Veldian Meridian Telescope",
       "The Veldian Meridian Telescope is a refracting telescope at the Ketter Observatory. It "
       "was installed in 1907. Its aperture is 76 centimeters."},
      {"Orrin",
       "Orrin is a weaving town on the Tammen River. The Orrin Tapestry was woven there. The "
       "town is known for indigo dyeing, and the composer Arno Lisk was born there."},
      {"Greyfen Regatta",
       "The Greyfen Regatta is an annual sailing race from the Port of Brindle to Cape Greyfen. "
       "It was first held in 1898. Brindle ale is traditionally served at the finish."},
      {"Elm Concerto",
       "The Elm Concerto is a composition by Arno Lisk. It premiered in 1924 at the Maribel "
       "Opera House. It is considered the best-known piece of Veldorian music."},
      {"Arno Lisk",
       "Arno Lisk (1881-1950) was a Veldorian composer. He was born in the weaving town of "
       "Orrin. His Elm Concerto premiered in 1924."},
      {"Maribel Opera House",
       "The Maribel Opera House is an opera house in Maribel City. It opened in 1899 and seats "
       "1,400. The Elm Concerto premiered there in 1924."},
      {"Sabel Gardens",
       "The Sabel Gardens are public gardens in Maribel City, laid out in 1770 for Queen Sabel. "
       "They are famous for lavender terraces. The lavender comes from the Penn Plateau."},
      {"Veldorian lavender",
       "Veldorian lavender is a fragrant shrub grown on the Penn Plateau. It is harvested for "
       "the perfume trade. The lavender terraces of the Sabel Gardens display it."},
      {"Republic Day",
       "Republic Day is the national holiday of Veldoria, held on 4 June. It marks the "
       "declaration of the republic in 1781. The largest celebrations take place in Maribel "
       "City."},
      {"Veldorian Senate",
       "The Veldorian Senate is the legislature of Veldoria. It has 120 seats. The Senate meets "
       "in the Senate Hall in Maribel City."},
      {"Senate Hall",
       "The Senate Hall is a domed hall in Maribel City, completed in 1812. It was designed by "
       "the architect Hetta Brandt. The Veldorian Senate meets there."},
      {"Hetta Brandt",
       "Hetta Brandt (1770-1839) was a Veldorian architect. She designed the Senate Hall and the "
       "Maribel Clocktower. She trained in Dunmore."},
      {"Calder ibex",
       "The Calder ibex is a mountain goat of the Calder Range. It is the symbol of the Venn "
       "Alpine Club. Small herds graze above Hartsel."},
      {"Ferris Current",
       "The Ferris Current is a warm ocean current of the Ceralt Sea. It is named after the "
       "marine biologist Nola Ferris. The current moderates Veldoria's winters."},
      {"Dunmore Polytechnic",
       "Dunmore Polytechnic is an engineering school in Dunmore, founded in 1869. Tobias Marsh "
       "taught astronomy there for thirty years."},
      {"Quill Codex",
       "The Quill Codex is a twelfth-century manuscript. It was found at Thessel City by Marta "
       "Quill in 1991. It is kept at the Aldwyn Museum."},
      {"Halden Bridge",
       "The Halden Bridge is a stone bridge over the Soryn River in Maribel City. It was built "
       "in 1754. It is the oldest surviving bridge in the capital."},
      {"Veldorian krona",
       "The Veldorian krona is the currency of Veldoria. It has been issued since 1781. Coins "
       "show the copper finch on the reverse."},
      {"Soryn Delta",
       "The Soryn Delta is a wetland where the Soryn River meets the Ceralt Sea. It is a "
       "wintering ground of the copper finch. The delta lies beside the Port of Brindle."},
      {"Ice lantern carving",
       "Ice lantern carving is a Veldorian winter craft. Carvers shape lanterns from blocks of "
       "lake ice. It is the centerpiece of the Frostlight Festival in Hartsel."},
  };
  return kArticles;
}

struct WikiQuestion {
  const char* question;
  const char* answer;
  std::vector<const char*> oracle;
};

inline constexpr std::size_t kWikiScenarioCount = 20;  // questions 20, 21 are few-shot only

inline const std::vector<WikiQuestion>& wiki_questions() {
  static const std::vector<WikiQuestion> kQuestions = {
      {"In which year was the university located in Maribel City founded?", "1892",
       {"search[Maribel City]", "search[Ketter University]", "lookup[founded]", "finish[1892]"}},
      {"Who made the first ascent of the highest peak in Veldoria?", "Rosa Venn",
       {"search[Veldoria]", "lookup[peak]", "search[Mount Calder]", "lookup[ascent]",
        "finish[Rosa Venn]"}},
      {"Which river begins at the lake that silver trout are native to?", "Tammen River",
       {"search[Silver trout]", "lookup[native]", "search[Lake Imre]", "lookup[source]",
        "finish[the Tammen River]"}},
      {"Who designed the hall where the Veldorian Senate meets?", "Hetta Brandt",
       {"search[Veldorian Senate]", "lookup[meets]", "search[Senate Hall]", "lookup[designed]",
        "finish[Hetta Brandt]"}},
      {"Where did the co-discoverer of comet Ketter-Marsh teach astronomy?",
       "Dunmore Polytechnic",
       {"search[Comet Ketter-Marsh]", "lookup[discovered]", "search[Tobias Marsh]",
        "lookup[taught]", "finish[Dunmore Polytechnic]"}},
      {"Which museum displays the crown of Queen Sabel?", "Aldwyn Museum",
       {"search[Queen Sabel]", "lookup[crown]", "finish[the Aldwyn Museum]"}},
      {"What is the main ingredient of imre pie?", "silver trout",
       {"search[Imre pie]", "lookup[trout]", "finish[silver trout]"}},
      {"In which town was the composer of the Elm Concerto born?", "Orrin",
       {"search[Elm Concerto]", "search[Arno Lisk]", "lookup[born]", "finish[Orrin]"}},
      {"How tall is the lighthouse at Cape Greyfen?", "54 meters",
       {"search[Cape Greyfen]", "search[Greyfen Lighthouse]", "lookup[meters]",
        "finish[54 meters]"}},
      {"Who commanded the winning fleet at the battle depicted in the Orrin Tapestry?",
       "Corin Vale",
       {"search[Orrin Tapestry]", "search[Battle of Greyfen]", "lookup[fleet]",
        "finish[Corin Vale]"}},
      {"In which town are the headquarters of the club founded by Rosa Venn?", "Hartsel",
       {"search[Rosa Venn]", "search[Venn Alpine Club]", "lookup[headquarters]",
        "finish[Hartsel]"}},
      {"Which festival has ice lantern carving as its centerpiece?", "Frostlight Festival",
       {"search[Ice lantern carving]", "lookup[centerpiece]", "finish[the Frostlight Festival]"}},
      {"Where was the bell of the Maribel Clocktower cast?", "Dunmore Foundry",
       {"search[Maribel Clocktower]", "lookup[bell]", "finish[the Dunmore Foundry]"}},
      {"Who founded the marine research institute at the Port of Brindle?", "Nola Ferris",
       {"search[Port of Brindle]", "search[Brindle Marine Institute]", "lookup[founded]",
        "finish[Nola Ferris]"}},
      {"What is the aperture of the telescope housed at the Ketter Observatory?",
       "76 centimeters",
       {"search[Ketter Observatory]", "search[Veldian Meridian Telescope]", "lookup[aperture]",
        "finish[76 centimeters]"}},
      {"Which ocean current is named after the founder of the Brindle Marine Institute?",
       "Ferris Current",
       {"search[Brindle Marine Institute]", "lookup[founded]", "search[Nola Ferris]",
        "lookup[current]", "finish[the Ferris Current]"}},
      {"At which university is the archaeologist who excavated Thessel City a professor?",
       "Ketter University",
       {"search[Thessel City]", "lookup[excavation]", "search[Marta Quill]", "lookup[professor]",
        "finish[Ketter University]"}},
      {"Which grain is brindle ale made with?", "Veldorian rye",
       {"search[Brindle ale]", "lookup[rye]", "finish[Veldorian rye]"}},
      {"In which year did the opera house where the Elm Concerto premiered open?", "1899",
       {"search[Elm Concerto]", "lookup[premiered]", "search[Maribel Opera House]",
        "lookup[opened]", "finish[1899]"}},
      {"Along which river does the national bird of Veldoria nest?", "Soryn River",
       {"search[Veldoria]", "lookup[national bird]", "search[Copper finch]", "lookup[nests]",
        "finish[the Soryn River]"}},
      // Reserved for the bundled few-shot example files.
      {"In which year was the Aldwyn Museum founded?", "1856",
       {"search[Aldwyn Museum]", "lookup[founded]", "finish[1856]"}},
      {"Which lake is the source of the Tammen River?", "Lake Imre",
       {"search[Tammen River]", "lookup[flows]", "finish[Lake Imre]"}},
  };
  return kQuestions;
}

}  // namespace hicrl
